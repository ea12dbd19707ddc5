#pragma once

#include "pclab/regions.hpp"

namespace pclab {

struct TwistLetter {
    NormalCurve curve;
    long power = 1;
};

// Word in Dehn twists; the last letter acts first, so {T_a, T_b^-1} is T_a o T_b^-1.
struct MappingClass {
    SurfacePtr surface;
    std::vector<TwistLetter> word;

    static MappingClass identity(SurfacePtr S);
    static MappingClass twist(const NormalCurve& a, long power = 1);
    MappingClass inverse() const;
    MappingClass operator*(const MappingClass& g) const;  // this o g
    MappingClass pow(long n) const;
    bool is_identity() const { return word.empty(); }
};

NormalCurve apply(const MappingClass& f, const NormalCurve& c);

struct PseudoAnosovSpec {
    NormalCurve a, b;
    MappingClass phi;  // T_a o T_b^-1
    RegionProfile profile;
    StratumSignature stratum;
    bool principal = false;
    Int trace_parameter = 0;  // i(a, b)
};

PseudoAnosovSpec thurston_veech(const NormalCurve& a, const NormalCurve& b);

// Largest root of x^2 - (t^2 + 2) x + 1: the spectral radius of [[1,t],[0,1]] [[1,0],[t,1]].
double tv_dilatation(const Int& t);

struct GrowthReport {
    std::vector<Int> intersections;  // i(phi^k p, p), k = 1..n
    std::vector<double> logs;        // log(1 + i)
    double slope = 0, intercept = 0;
    std::vector<double> residuals;
    double tail_slope = 0;    // log i_n - log i_{n-1}
    double loglog_slope = 0;  // slope of log(1 + i) against log k
};

GrowthReport dilatation_estimate(const MappingClass& phi, const NormalCurve& probe, int n);

// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> least_squares(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pclab
