#include "pcgbench/classical.hpp"

#include <cmath>

#include "pcgbench/errors.hpp"

namespace pcgbench {

namespace {

void require_dims(Index n, std::span<const double> r, std::span<double> z, const char* who)
{
    if (static_cast<Index>(r.size()) != n || r.size() != z.size()) {
        throw DimensionMismatch(std::string(who) + ": length mismatch");
    }
}

}  // namespace

const char* to_string(TnsAlpha a)
{
    switch (a) {
    case TnsAlpha::inv_fro:
        return "1/fro";
    case TnsAlpha::inv_inf:
        return "1/inf";
    case TnsAlpha::inv_one:
        return "1/one";
    case TnsAlpha::two_over_two_norm:
        return "2/two";
    case TnsAlpha::unit:
        return "1";
    }
    return "?";
}

double tns_alpha(TnsAlpha choice, const MatrixNorms& norms, double two_norm)
{
    switch (choice) {
    case TnsAlpha::inv_fro:
        return 1.0 / norms.fro;
    case TnsAlpha::inv_inf:
        return 1.0 / norms.inf;
    case TnsAlpha::inv_one:
        return 1.0 / norms.one;
    case TnsAlpha::two_over_two_norm:
        return 2.0 / two_norm;
    case TnsAlpha::unit:
        return 1.0;
    }
    return 1.0;
}

TnsPreconditioner::TnsPreconditioner(SparseMatrix a, int terms, double alpha, std::string label)
    : a_(std::move(a)), terms_(terms), alpha_(alpha), label_(std::move(label))
{
    if (terms_ < 1) {
        throw InvalidConfig("truncated Neumann series needs at least one term");
    }
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
        throw InvalidConfig("truncated Neumann series needs a finite alpha > 0");
    }
}

void TnsPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    require_dims(a_.n(), r, z, "tns");
    Vector y(r.begin(), r.end());
    Vector ay(y.size());
    for (int k = 0; k < terms_; ++k) {
        matvec(a_, y, ay);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = r[i] + y[i] - alpha_ * ay[i];
        }
    }
    for (std::size_t i = 0; i < y.size(); ++i) {
        z[i] = alpha_ * y[i];
    }
}

std::string tns_label(const TnsConfig& cfg)
{
    return "tns(m=" + std::to_string(cfg.terms) + ",alpha=" + to_string(cfg.alpha_choice) + ")";
}

PreconditionerPtr build_tns(const SparseMatrix& a, const TnsConfig& cfg, double two_norm)
{
    const double alpha = tns_alpha(cfg.alpha_choice, norms(a), two_norm);
    return std::make_shared<TnsPreconditioner>(a, cfg.terms, alpha, tns_label(cfg));
}

Vector remainder_series_apply(const SparseMatrix& a, std::span<const double> r, int terms)
{
    if (terms < 1) {
        throw InvalidConfig("series needs at least one term");
    }
    // Horner on -R = A - I: y <- r + (A - I) y.
    Vector y(r.begin(), r.end());
    Vector ay(y.size());
    for (int k = 0; k < terms; ++k) {
        matvec(a, y, ay);
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = r[i] + (ay[i] - y[i]);
        }
    }
    return y;
}

bool tns_equivalent_to_control(const TnsConfig& cfg)
{
    return cfg.terms == 1 && cfg.alpha_choice == TnsAlpha::unit;
}

SsorPreconditioner::SsorPreconditioner(SparseMatrix a, SsorConfig cfg)
    : a_(std::move(a)), diag_(a_.diagonal_values()), cfg_(cfg)
{
    if (cfg_.sweeps < 1) {
        throw InvalidConfig("SSOR needs at least one sweep");
    }
    if (!(cfg_.omega > 0.0 && cfg_.omega < 2.0)) {
        throw InvalidConfig("SSOR omega must lie in (0, 2), got " + format_param(cfg_.omega));
    }
    if (cfg_.mode == SsorMode::sgs && cfg_.omega != 1.0) {
        throw InvalidConfig("symmetric Gauss-Seidel requires omega = 1");
    }
    for (Index i = 0; i < a_.n(); ++i) {
        if (diag_[i] == 0.0) {
            throw SingularFactor("SSOR: zero diagonal at row " + std::to_string(i));
        }
    }
}

void SsorPreconditioner::apply(std::span<const double> r, std::span<double> z) const
{
    require_dims(a_.n(), r, z, "ssor");
    const Index n = a_.n();
    const double w = cfg_.omega;
    const bool relaxed = cfg_.mode == SsorMode::ssor;
    std::fill(z.begin(), z.end(), 0.0);

    auto relax_row = [&](Index i) {
        const auto cols = a_.row_cols(i);
        const auto vals = a_.row_values(i);
        double sigma = 0.0;
        for (std::size_t k = 0; k < cols.size(); ++k) {
            if (cols[k] != i) {
                sigma += vals[k] * z[cols[k]];
            }
        }
        const double gs = (r[i] - sigma) / diag_[i];
        z[i] = relaxed ? (1.0 - w) * z[i] + w * gs : gs;
    };

    for (int s = 0; s < cfg_.sweeps; ++s) {
        for (Index i = 0; i < n; ++i) {
            relax_row(i);
        }
        for (Index i = n - 1; i >= 0; --i) {
            relax_row(i);
        }
    }
}

Count SsorPreconditioner::apply_cost() const
{
    const Count per_sweep =
        2 * a_.nnz() + (cfg_.mode == SsorMode::ssor ? 2 * 2 * a_.n() : 0);
    return static_cast<Count>(cfg_.sweeps) * per_sweep;
}

std::string ssor_label(const SsorConfig& cfg)
{
    if (cfg.mode == SsorMode::sgs) {
        return "sgs(sweeps=" + std::to_string(cfg.sweeps) + ")";
    }
    const std::string w = cfg.omega_is_optimal ? "opt" : format_param(cfg.omega);
    return "ssor(omega=" + w + ",sweeps=" + std::to_string(cfg.sweeps) + ")";
}

std::string SsorPreconditioner::label() const
{
    return ssor_label(cfg_);
}

PreconditionerPtr build_ssor(const SparseMatrix& a, const SsorConfig& cfg)
{
    return std::make_shared<SsorPreconditioner>(a, cfg);
}

double optimal_omega(double norm_j)
{
    if (!(norm_j >= 0.0 && norm_j <= 1.0)) {
        throw InvalidConfig("optimal omega is undefined for ||J|| = " + format_param(norm_j));
    }
    const double t = norm_j / (1.0 + std::sqrt(1.0 - norm_j * norm_j));
    return 1.0 + t * t;
}

}  // namespace pcgbench
