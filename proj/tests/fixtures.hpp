#pragma once

// Hand-built record sets and curves with known answers, shared by the unit
// tests and the acceptance binary.

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "pcgbench/analytics.hpp"

namespace fixture {

using pcgbench::Count;
using pcgbench::RunRecord;
using pcgbench::RunStatus;

inline RunRecord converged(const std::string& matrix, const std::string& label, Count control, Count work,
                           Count gen = 0)
{
    RunRecord r;
    r.matrix_id = matrix;
    r.ordering_label = "natural";
    r.precond_label = label;
    r.precond_class = pcgbench::precond_class_of(label);
    r.status = RunStatus::converged;
    r.iters = 1;
    r.work_to_tol = work;
    r.apply_cost = 1;
    r.generation_cost = gen;
    r.control_work = control;
    return r;
}

inline RunRecord failed(const std::string& matrix, const std::string& label, Count control, RunStatus s)
{
    RunRecord r;
    r.matrix_id = matrix;
    r.ordering_label = "natural";
    r.precond_label = label;
    r.precond_class = pcgbench::precond_class_of(label);
    r.status = s;
    r.control_work = control;
    if (s != RunStatus::generation_failure) {
        r.apply_cost = 1;
    }
    return r;
}

/// Ratios 4, 10, 1, 0.5, 200 plus one max_iters and one generation failure.
inline std::vector<RunRecord> stats_records()
{
    return {
        converged("m1", "x(a=1)", 1000, 250),
        converged("m2", "x(a=1)", 1000, 100),
        converged("m3", "x(a=1)", 1000, 1000),
        converged("m4", "x(a=1)", 1000, 2000),
        failed("m5", "x(a=1)", 1000, RunStatus::max_iters),
        failed("m6", "x(a=1)", 1000, RunStatus::generation_failure),
        converged("m7", "x(a=1)", 1000, 5),
    };
}

struct ExpectedStats {
    double geo_mean;
    double success_rate;
    double parity;
    double ge2x;
    double ge4x;
    double ge8x;
    double auc;
};

/// Trapezoid area (in log2 units) of the sampled indicator y_i = [x_i <= r]
/// on the 512-point grid, i.e. delta * (K + 1/2) with K the last index
/// inside, or the full width when every node is inside.
inline double sampled_step_area(double ratio)
{
    constexpr int last = 511;
    const double delta = 9.0 / last;
    if (ratio <= 0.0) {
        return 0.0;
    }
    const double k = std::floor((std::log2(ratio) + 2.0) / delta);
    if (k < 0) {
        return 0.0;
    }
    if (k >= last) {
        return 9.0;
    }
    return delta * (k + 0.5);
}

inline ExpectedStats expected_stats()
{
    // geo: failures as 1/4, 200 capped to 128.
    const double product = 4.0 * 10.0 * 1.0 * 0.5 * 0.25 * 0.25 * 128.0;
    const double ratios[] = {4.0, 10.0, 1.0, 0.5, 0.0, 0.0, 200.0};
    double area = 0.0;
    for (const double r : ratios) {
        area += sampled_step_area(r);
    }
    return {std::pow(product, 1.0 / 7.0), 6.0 / 7.0, 4.0 / 7.0, 3.0 / 7.0, 3.0 / 7.0, 2.0 / 7.0,
            area / (9.0 * 7.0)};
}

/// Grid node i of the standard profile grid, in log2 units.
inline double node(int i)
{
    return -2.0 + 9.0 * i / 511.0;
}

struct CurveFixture {
    std::string name;
    std::function<double(double)> f;
    double integral;  ///< (1/9) of the exact integral over [-2, 7]
};

/// Piecewise-linear curves with breakpoints on grid nodes; the trapezoid
/// rule integrates them exactly.
inline std::vector<CurveFixture> curve_fixtures()
{
    std::vector<CurveFixture> out;
    out.push_back({"ramp", [](double t) { return (t + 2.0) / 9.0; }, 0.5});

    const double a = node(200);
    const double b = node(400);
    out.push_back({"plateau-then-ramp",
                   [a, b](double t) {
                       if (t <= a) {
                           return 1.0;
                       }
                       if (t >= b) {
                           return 0.0;
                       }
                       return (b - t) / (b - a);
                   },
                   ((a + 2.0) + 0.5 * (b - a)) / 9.0});

    const double c = node(100);
    out.push_back({"tent",
                   [c](double t) { return t <= c ? 0.8 * (t + 2.0) / (c + 2.0) : 0.8 * (7.0 - t) / (7.0 - c); },
                   0.5 * 0.8 * 9.0 / 9.0});
    return out;
}

}  // namespace fixture
