#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stieltjes/convex/smooth_function.hpp"
#include "stieltjes/exprdsl/convergence.hpp"

namespace stieltjes::criteria {

enum class Outcome { Determinate, Indeterminate, Inconclusive };

inline const char* to_cstr(Outcome o) {
    switch (o) {
    case Outcome::Determinate: return "determinate";
    case Outcome::Indeterminate: return "indeterminate";
    default: return "inconclusive";
    }
}

struct EvidenceEntry {
    std::string criterion;                  // stable id, evidence is sorted on it
    std::string kind;                       // "convergence" | "boolean" | "note"
    std::optional<exprdsl::ConvergenceVerdict> conv;
    std::optional<bool> flag;
    std::map<std::string, double> metrics;  // fitted constants, deviations, horizons
    std::string detail;
    bool decisive = false;
};

struct Verdict {
    Outcome outcome = Outcome::Inconclusive;
    std::vector<EvidenceEntry> evidence;

    void sort_evidence() {
        std::stable_sort(evidence.begin(), evidence.end(),
                         [](const EvidenceEntry& a, const EvidenceEntry& b) {
                             return a.criterion < b.criterion;
                         });
    }
};

enum class MomentProvenance { ClosedForm, LevyExponent, NumericOracle };

// A Stieltjes moment sequence, held in log scale so huge moments stay
// representable.  The optional complex-line evaluator returns
// log |M(n + i w)| - log M(n) (exactly the Esscher ratio the condition-(b)
// machinery needs).
struct MomentSequence {
    std::function<double(double)> log_m;
    std::optional<exprdsl::ExprPtr> log_m_expr; // G with log M = G, when closed-form
    std::function<double(double, double)> log_abs_ratio;
    bool has_complex_line = false;
    bool probability_normalized = true; // M(0) = 1
    MomentProvenance provenance = MomentProvenance::ClosedForm;

    double m(double n) const { return std::exp(log_m(n)); }
};

enum class DensityRelation { BigO, TwoSided, TailBigO };

inline const char* to_cstr(DensityRelation r) {
    switch (r) {
    case DensityRelation::BigO: return "big-O";
    case DensityRelation::TwoSided: return "two-sided";
    default: return "tail-big-O";
    }
}

// nu(x) compared against e^{-G_*(log x)} in the declared sense.
struct DensityAsymptote {
    convex::SmoothFunction gstar;
    DensityRelation relation = DensityRelation::BigO;
    bool asserted_by_user = false; // the comparison itself is an input, not verified
};

// How condition (b) of the moment-sequence theorem was established.
enum class CondB { Unavailable, Asserted, Verified };

inline const char* to_cstr(CondB c) {
    switch (c) {
    case CondB::Asserted: return "asserted";
    case CondB::Verified: return "verified";
    default: return "unavailable";
    }
}

namespace detail {

// finite-horizon boundedness: accepted when the last three finite samples are
// non-increasing (tiny slack for roundoff jitter)
inline bool bounded_on_tail(const std::vector<double>& log_values, double slack = 1e-9) {
    std::vector<double> v;
    for (double x : log_values)
        if (std::isfinite(x)) v.push_back(x);
    if (v.size() < 3) return false;
    const std::size_t n = v.size();
    return v[n - 1] <= v[n - 2] + slack && v[n - 2] <= v[n - 3] + slack;
}

inline std::vector<double> doubling_points(double lo_exp, double hi_exp) {
    std::vector<double> xs;
    for (double k = lo_exp; k <= hi_exp; k += 1.0) xs.push_back(std::pow(2.0, k));
    return xs;
}

} // namespace detail

} // namespace stieltjes::criteria
