#pragma once

#include <string>

#include "pcgbench/norms.hpp"
#include "pcgbench/preconditioner.hpp"

namespace pcgbench {

// ----------------------------------------------------------------------------
// Truncated Neumann series

/// Choice of alpha for M^{-1} = alpha * sum_{k=0}^{m} (I - alpha A)^k.
enum class TnsAlpha {
    inv_fro,   ///< 1 / ||A||_F
    inv_inf,   ///< 1 / ||A||_inf
    inv_one,   ///< 1 / ||A||_1
    two_over_two_norm,  ///< 2 / ||A||_2
    unit,      ///< 1
};

const char* to_string(TnsAlpha a);

struct TnsConfig {
    int terms = 1;  ///< m >= 1
    TnsAlpha alpha_choice = TnsAlpha::unit;
};

double tns_alpha(TnsAlpha choice, const MatrixNorms& norms, double two_norm);

class TnsPreconditioner final : public Preconditioner {
public:
    /// Throws InvalidConfig if terms < 1 or alpha <= 0.
    TnsPreconditioner(SparseMatrix a, int terms, double alpha, std::string label);

    Index dim() const override { return a_.n(); }
    /// Horner form: y <- r + (I - alpha A) y, m times from y = r; z = alpha y.
    void apply(std::span<const double> r, std::span<double> z) const override;
    Count apply_cost() const override { return static_cast<Count>(terms_) * a_.nnz(); }
    std::string label() const override { return label_; }

    int terms() const { return terms_; }
    double alpha() const { return alpha_; }

private:
    SparseMatrix a_;
    int terms_;
    double alpha_;
    std::string label_;
};

std::string tns_label(const TnsConfig& cfg);

/// two_norm is only read for TnsAlpha::two_over_two_norm.
PreconditionerPtr build_tns(const SparseMatrix& a, const TnsConfig& cfg, double two_norm = 0.0);

/// sum_{k=0}^{m} (-R)^k r with R = I - A: the remainder-matrix form of the
/// series. For m = 1 this is exactly A r.
Vector remainder_series_apply(const SparseMatrix& a, std::span<const double> r, int terms);

/// m = 1 with alpha = 1 on a unit-diagonal system builds the same Krylov
/// space as no preconditioning at about the same work; reports flag it.
bool tns_equivalent_to_control(const TnsConfig& cfg);

// ----------------------------------------------------------------------------
// Symmetric Gauss-Seidel / SSOR

enum class SsorMode { sgs, ssor };

struct SsorConfig {
    double omega = 1.0;  ///< (0, 2); exactly 1 in sgs mode
    int sweeps = 1;
    SsorMode mode = SsorMode::sgs;
    /// Label the omega as the Property-A optimum rather than by value.
    bool omega_is_optimal = false;
};

class SsorPreconditioner final : public Preconditioner {
public:
    SsorPreconditioner(SparseMatrix a, SsorConfig cfg);

    Index dim() const override { return a_.n(); }
    /// `sweeps` forward+backward sweeps of the relaxation on A x = r from x = 0.
    void apply(std::span<const double> r, std::span<double> z) const override;
    Count apply_cost() const override;
    std::string label() const override;

    const SsorConfig& config() const { return cfg_; }

private:
    SparseMatrix a_;
    Vector diag_;
    SsorConfig cfg_;
};

std::string ssor_label(const SsorConfig& cfg);

/// Throws InvalidConfig for omega outside (0,2), sweeps < 1, or sgs with
/// omega != 1; SingularFactor on a zero diagonal.
PreconditionerPtr build_ssor(const SparseMatrix& a, const SsorConfig& cfg);

/// omega = 1 + (||J|| / (1 + sqrt(1 - ||J||^2)))^2. Throws InvalidConfig
/// when ||J|| is outside [0, 1].
double optimal_omega(double norm_j);

}  // namespace pcgbench
