#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace restcheck::lorentz {

/// Nonnegative step function on a uniform grid over [0, length]: the value
/// values[i] is held on the cell [i h, (i+1) h), h = length / values.size().
/// Construction takes the modulus of the input, so values are magnitudes.
struct SampledFunction {
    std::vector<double> values;
    double length = 1.0;

    double cell() const { return length / static_cast<double>(values.size()); }
};

/// Validated constructor: finite input, at least one cell, length > 0.
/// Stores |values[i]|.
SampledFunction make_sampled(std::vector<double> values, double length);

/// Nonincreasing rearrangement in step form.  value is strictly decreasing
/// (ties coalesced), weight[k] is the measure carried by value[k], and
/// breakpoint holds the partial measures t_0 = 0 < t_1 < ... < t_K = length,
/// so the rearranged function equals value[k] on [t_k, t_{k+1}).  A trailing
/// zero step is kept so the weights always sum to the full length.
struct Rearrangement {
    std::vector<double> value;
    std::vector<double> weight;
    std::vector<double> breakpoint;
    double length = 0.0;
};

/// Measure of the strict super-level set {|u| > alpha}; right-continuous and
/// nonincreasing in alpha.  Requires alpha >= 0.
double distribution_fn(const SampledFunction& u, double alpha);
double distribution_fn(const Rearrangement& r, double alpha);

/// Sort the cells by magnitude; equimeasurable with u by construction.
Rearrangement rearrangement(const SampledFunction& u);

/// Norm ((q/p) * integral of [t^{1/p} u*(t)]^q dt/t)^{1/q} for finite
/// 1 <= p, q.  Evaluated in closed form over the step rearrangement:
/// sum_k value_k^q (t_{k+1}^{q/p} - t_k^{q/p}), no quadrature error.
/// Coincides with the grid L^p norm when q = p.  Evaluation is normalized by
/// the peak value, so any norm representable in double range is returned
/// without intermediate overflow.
double lorentz_norm(const SampledFunction& u, double p, double q);

/// The two a-priori-equal expressions for the weak norm, computed by
/// independent routes: sup_t t^{1/p} u*(t) from the rearrangement steps and
/// sup_alpha alpha * |{|u| >= alpha}|^{1/p} from cell counts.
struct WeakNormRoutes {
    double from_rearrangement;
    double from_distribution;
};
WeakNormRoutes weak_norm_routes(const SampledFunction& u, double p);

/// sup_t t^{1/p} u*(t) for p >= 1.  Cross-checks the two routes against each
/// other to 1e-9 relative and throws std::logic_error if they disagree.
double weak_norm(const SampledFunction& u, double p);

/// Grid L^p norm (sum_i values[i]^p * h)^{1/p}, the direct route the Lorentz
/// norm must match at q = p.
double grid_norm(const SampledFunction& u, double p);

/// The quantities entering the interpolation inequality
///   ||u||_4 <= 2^{1/4} * (weak 4-norm)^{1/2} * (4,2-norm)^{1/2},
/// whose constant is sharp for the (q/p)-normalized norm above.  ratio is
/// the left side divided by the right side without the constant.
struct InterpolationReport {
    double l4 = 0;
    double weak4 = 0;
    double l42 = 0;
    double ratio = 0;
    double bound = 0; // 2^{1/4}
};

/// Evaluates the report and throws std::logic_error if ratio exceeds
/// bound + 1e-9.  The identically zero function is rejected.
InterpolationReport interpolation_check(const SampledFunction& u);

/// One named check: observed value against its reference threshold.
struct CheckRecord {
    std::string name;
    double value = 0;
    double reference = 0;
    bool pass = false;
};

struct LorentzReport {
    std::vector<CheckRecord> records;
    bool passed = false;
};

/// Runs the module invariants over a corpus of `samples` random step
/// functions drawn deterministically from `seed`: p = q norms against the
/// grid norm, the weak-norm identity, equimeasurability, rearrangement and
/// scaling invariance, the weak <= strong embedding, and the interpolation
/// ratio bound.  Requires samples >= 1.
LorentzReport verify_lorentz(int samples, std::uint64_t seed);

nlohmann::ordered_json to_json(const InterpolationReport& r);
nlohmann::ordered_json to_json(const LorentzReport& r);

} // namespace restcheck::lorentz
