// params.hpp : parameter set selecting a Bertrand space (metric family + potential constants).
#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

namespace bertrand {

enum class Family { TypeI, TypeII };

inline const char* family_name(Family f) { return f == Family::TypeI ? "type1" : "type2"; }

// Family tag, coprime (n, m), and the constants fixing metric and potential.
// D and the branch sign belong to TypeII only; accessing them on a TypeI
// parameter set is a logic error, not a soft default.
struct BertrandParams {
    Family family = Family::TypeI;
    int n = 1;
    int m = 1;
    double K = 0.0;
    double G = 0.0;
    double amplitude = 1.0;  // +1 reproduces the published potentials verbatim

    static BertrandParams type1(int n, int m, double K, double G = 0.0, double amplitude = 1.0) {
        BertrandParams p;
        p.family = Family::TypeI;
        p.n = n; p.m = m; p.K = K; p.G = G; p.amplitude = amplitude;
        p.validate();
        return p;
    }

    static BertrandParams type2(int n, int m, double K, double D, int branch, double G = 0.0,
                                double amplitude = 1.0) {
        BertrandParams p;
        p.family = Family::TypeII;
        p.n = n; p.m = m; p.K = K; p.G = G; p.amplitude = amplitude;
        p.d_ = D; p.branch_ = branch;
        p.validate();
        return p;
    }

    double D() const {
        require_type2("D");
        return d_;
    }
    int branch() const {
        require_type2("branch");
        return branch_;
    }

    void set_D(double D) {
        require_type2("D");
        d_ = D;
    }
    void set_branch(int b) {
        require_type2("branch");
        branch_ = b;
        validate();
    }

    void validate() const {
        if (n < 1 || m < 1) throw std::invalid_argument("n and m must be positive integers");
        if (std::gcd(n, m) != 1) throw std::invalid_argument("n and m must be coprime");
        if (amplitude == 0.0) throw std::invalid_argument("amplitude must be nonzero");
        if (branch_ != 1 && branch_ != -1) throw std::invalid_argument("branch must be +1 or -1");
    }

  private:
    void require_type2(const char* field) const {
        if (family != Family::TypeII)
            throw std::logic_error(std::string(field) + " is a TypeII parameter");
    }

    double d_ = 0.0;
    int branch_ = 1;
};

// Open maximal radial interval on which the metric coefficient is finite and positive.
struct RadialDomain {
    double r_lo = 0.0;
    double r_hi = 0.0;  // +inf when unbounded

    bool contains(double r) const { return r > r_lo && r < r_hi; }
};

}  // namespace bertrand
