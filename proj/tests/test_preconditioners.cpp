#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "pcgbench/classical.hpp"
#include "pcgbench/costing.hpp"
#include "pcgbench/errors.hpp"
#include "pcgbench/harness/config.hpp"
#include "pcgbench/harness/generators.hpp"
#include "pcgbench/harness/runner.hpp"
#include "pcgbench/incomplete_cholesky.hpp"
#include "pcgbench/laplacian.hpp"
#include "pcgbench/norms.hpp"
#include "pcgbench/pcg.hpp"
#include "pcgbench/scaling.hpp"
#include "pcgbench/sspai.hpp"

using namespace pcgbench;

namespace {

Eigen::MatrixXd operator_matrix(const Preconditioner& m)
{
    const Index n = m.dim();
    Eigen::MatrixXd out(n, n);
    Vector e(n, 0.0);
    for (Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        out.col(j) = oracle::to_eigen(m.apply(e));
        e[j] = 0.0;
    }
    return out;
}

const SparseMatrix& lower_of(const BuildResult& r)
{
    const auto& p = std::get<PreconditionerPtr>(r);
    return dynamic_cast<const TriangularPairPreconditioner&>(*p).lower();
}

SparseMatrix scaled(const Eigen::MatrixXd& d)
{
    return scale_and_symmetrize(oracle::sparse(d)).matrix;
}

}  // namespace

TEST_CASE("control is the identity with zero cost")
{
    const auto m = build_jacobi_control(2);
    CHECK(m->apply(Vector{1, 2}) == Vector{1, 2});
    CHECK(m->apply_cost() == 0);
    CHECK(m->generation_cost() == 0);
    CHECK(m->label() == "control");
}

TEST_CASE("TNS: m=1, alpha=1 is 2I - A; remainder series gives A")
{
    const auto a = scaled(oracle::random_sparse_spd(25, 0.15, 3));
    const auto m = build_tns(a, {1, TnsAlpha::unit});
    Xoshiro256pp rng(5);
    const auto r = oracle::random_vector(25, rng);
    const auto z = m->apply(r);
    const auto ar = matvec(a, r);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(std::abs(z[i] - (2 * r[i] - ar[i])) <= 1e-14);
    }
    const auto series = remainder_series_apply(a, r, 1);
    for (std::size_t i = 0; i < r.size(); ++i) {
        CHECK(std::abs(series[i] - ar[i]) <= 1e-14);
    }
    CHECK(tns_equivalent_to_control({1, TnsAlpha::unit}));
    CHECK_FALSE(tns_equivalent_to_control({2, TnsAlpha::unit}));
    CHECK(m->apply_cost() == a.nnz());
    CHECK(build_tns(a, {3, TnsAlpha::inv_fro})->apply_cost() == 3 * a.nnz());
    CHECK(m->label() == "tns(m=1,alpha=1)");
}

TEST_CASE("TNS matches dense polynomial evaluation")
{
    const auto a = scaled(oracle::random_sparse_spd(20, 0.2, 8));
    const auto d = oracle::dense(a);
    const auto nm = norms(a);
    for (const int m : {1, 2, 3, 4}) {
        for (const auto choice : {TnsAlpha::inv_fro, TnsAlpha::inv_inf, TnsAlpha::inv_one, TnsAlpha::unit}) {
            const double alpha = tns_alpha(choice, nm, 0.0);
            Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(20, 20);
            Eigen::MatrixXd power = Eigen::MatrixXd::Identity(20, 20);
            const Eigen::MatrixXd step = Eigen::MatrixXd::Identity(20, 20) - alpha * d;
            for (int k = 0; k <= m; ++k) {
                ref += power;
                power = step * power;
            }
            ref *= alpha;
            const auto op = operator_matrix(*build_tns(a, {m, choice}));
            CHECK((op - ref).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
        }
    }
    // A = I, alpha = 1: every term past k = 0 vanishes.
    const auto id = SparseMatrix::identity(6);
    CHECK(build_tns(id, {3, TnsAlpha::unit})->apply(Vector(6, 1.0)) == Vector(6, 1.0));
    CHECK_THROWS_AS(build_tns(id, {0, TnsAlpha::unit}), InvalidConfig);
    CHECK(tns_alpha(TnsAlpha::two_over_two_norm, nm, 4.0) == 0.5);
}

TEST_CASE("SSOR: hand case, dense formula, costs and validation")
{
    const double av = 0.3;
    const auto a = SparseMatrix::from_triplets(2, {{0, 0, 1}, {0, 1, av}, {1, 0, av}, {1, 1, 1}});
    const auto z = build_ssor(a, {})->apply(Vector{1, 0});
    CHECK(std::abs(z[0] - (1 + av * av)) <= 1e-14);
    CHECK(std::abs(z[1] + av) <= 1e-14);
    CHECK(build_ssor(SparseMatrix::identity(3), {})->apply(Vector{1, 2, 3}) == Vector{1, 2, 3});

    // One sweep of SSOR equals M^{-1} with M = w / (2 - w) (D/w + L) D^{-1} (D/w + U).
    const auto s = scaled(oracle::random_sparse_spd(15, 0.3, 2));
    const auto d = oracle::dense(s);
    for (const double w : {0.7, 1.2, 1.8}) {
        const Eigen::MatrixXd dd = d.diagonal().asDiagonal();
        const Eigen::MatrixXd l = d.triangularView<Eigen::StrictlyLower>();
        const Eigen::MatrixXd u = d.triangularView<Eigen::StrictlyUpper>();
        const Eigen::MatrixXd mm = (dd / w + l) * dd.inverse() * (dd / w + u) * (w / (2 - w));
        const Eigen::MatrixXd ref = mm.inverse();
        const auto op = operator_matrix(*build_ssor(s, {w, 1, SsorMode::ssor}));
        CHECK((op - ref).cwiseAbs().maxCoeff() <= 1e-10 * ref.cwiseAbs().maxCoeff());
        // Two sweeps: x1 = M^{-1} r, x2 = x1 + M^{-1}(r - A x1).
        const Eigen::MatrixXd two = ref + ref * (Eigen::MatrixXd::Identity(15, 15) - d * ref);
        const auto op2 = operator_matrix(*build_ssor(s, {w, 2, SsorMode::ssor}));
        CHECK((op2 - two).cwiseAbs().maxCoeff() <= 1e-10 * two.cwiseAbs().maxCoeff());
    }
    CHECK(build_ssor(s, {1.0, 2, SsorMode::sgs})->apply_cost() == 2 * 2 * s.nnz());
    CHECK(build_ssor(s, {1.5, 1, SsorMode::ssor})->apply_cost() == 2 * s.nnz() + 4 * 15);
    CHECK(build_ssor(s, {1.5, 1, SsorMode::ssor})->label() == "ssor(omega=1.5,sweeps=1)");
    CHECK_THROWS_AS(build_ssor(s, {2.0, 1, SsorMode::ssor}), InvalidConfig);
    CHECK_THROWS_AS(build_ssor(s, {1.2, 1, SsorMode::sgs}), InvalidConfig);
    CHECK_THROWS_AS(build_ssor(s, {1.0, 0, SsorMode::sgs}), InvalidConfig);
    const auto nodiag = SparseMatrix::from_triplets(2, {{0, 1, 1.0}, {1, 0, 1.0}, {1, 1, 1.0}});
    CHECK_THROWS_AS(build_ssor(nodiag, {}), SingularFactor);
}

TEST_CASE("SSOR-preconditioned CG converges on random SPD systems")
{
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
        const auto a = scaled(oracle::random_dense_spd(50, seed, 1.0));
        Xoshiro256pp rng(seed);
        const auto b = oracle::random_vector(50, rng);
        for (const double w : {0.5, 1.0, 1.5, 1.9}) {
            const SsorConfig cfg{w, 1, w == 1.0 ? SsorMode::sgs : SsorMode::ssor};
            const auto t = pcg(a, b, *build_ssor(a, cfg));
            CHECK(t.status == SolveStatus::converged);
        }
    }
}

TEST_CASE("optimal omega")
{
    CHECK(optimal_omega(0.0) == 1.0);
    CHECK(std::abs(optimal_omega(std::sqrt(3.0) / 2) - 4.0 / 3.0) <= 1e-12);
    CHECK(std::abs(optimal_omega(1 - 1e-12) - 2.0) <= 1e-4);
    CHECK_THROWS_AS(optimal_omega(1.01), InvalidConfig);
    CHECK_THROWS_AS(optimal_omega(-0.1), InvalidConfig);
}

TEST_CASE("IC(0) on a tridiagonal matrix is the exact Cholesky factor")
{
    const auto a = scaled(oracle::dense(tridiag(30)));
    const auto f = std::get<IcFactor>(build_ic(a, {0.0, false}));
    const Eigen::MatrixXd ref = Eigen::LLT<Eigen::MatrixXd>(oracle::dense(a)).matrixL();
    CHECK((oracle::dense(f.lower) - ref).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(f.fill_ratio == 1.0);
}

TEST_CASE("IC(0) keeps the pattern of tril(A)")
{
    const auto a = scaled(oracle::dense(poisson2d(8)));
    const auto f = std::get<IcFactor>(build_ic(a, {0.0, false}));
    const auto tril = a.lower();
    for (const auto& t : f.lower.triplets()) {
        CHECK(tril.contains(t.row, t.col));
    }
}

TEST_CASE("threshold IC tends to exact Cholesky and fill is monotone")
{
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto a = scaled(oracle::random_sparse_spd(30, 0.1, seed));
        const auto f = std::get<IcFactor>(build_ic(a, {1e-14, false}));
        const auto l = oracle::dense(f.lower);
        const auto d = oracle::dense(a);
        CHECK((l * l.transpose() - d).norm() <= 1e-10 * d.norm());
    }
    const auto a = scaled(oracle::dense(poisson2d(12)));
    Index prev = -1;
    for (const double tol : {1e-8, 1e-6, 1e-4, 1e-2, 1e-1}) {
        const auto f = std::get<IcFactor>(build_ic(a, {tol, false}));
        if (prev >= 0) {
            CHECK(f.lower.nnz() <= prev);
        }
        prev = f.lower.nnz();
    }
    for (const bool mod : {false, true}) {
        for (const double tol : {0.0, 1e-4}) {
            const auto f = std::get<IcFactor>(build_ic(SparseMatrix::identity(4), {tol, mod}));
            CHECK(f.lower == SparseMatrix::identity(4));
        }
    }
    CHECK(ic_label({1e-6, false}) == "ic(droptol=1e-06)");
    CHECK(ic_label({1e-6, true}) == "mic(droptol=1e-06)");
}

TEST_CASE("MIC preserves the action on the constant vector")
{
    int built = 0;
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const auto a = random_sdd(60, 0.08, seed);
        for (const double tol : {0.0, 1e-2, 1e-1}) {
            const auto r = build_ic(a, {tol, true});
            if (!std::holds_alternative<IcFactor>(r)) {
                continue;
            }
            ++built;
            const auto l = oracle::dense(std::get<IcFactor>(r).lower);
            const Eigen::VectorXd e = Eigen::VectorXd::Ones(60);
            const auto d = oracle::dense(a);
            const double lhs = ((l * l.transpose() - d) * e).lpNorm<Eigen::Infinity>();
            CHECK(lhs <= 1e-8 * d.cwiseAbs().rowwise().sum().maxCoeff());
        }
    }
    CHECK(built > 0);
}

TEST_CASE("IC reports a nonpositive pivot as a generation failure")
{
    const auto a = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 1.0}});
    const auto r = build_ic(a, {0.0, false});
    REQUIRE(std::holds_alternative<GenerationFailure>(r));
    CHECK(std::get<GenerationFailure>(r).column == 1);
    CHECK(std::get<GenerationFailure>(r).value == doctest::Approx(-3.0));
    CHECK_FALSE(succeeded(build_ic_preconditioner(a, {0.0, false})));
}

TEST_CASE("IC preconditioner costs")
{
    const auto a = scaled(oracle::dense(poisson2d(6)));
    const auto r = build_ic_preconditioner(a, {1e-4, false});
    REQUIRE(succeeded(r));
    const auto& p = *std::get<PreconditionerPtr>(r);
    const auto& l = lower_of(r);
    CHECK(p.apply_cost() == 2 * l.nnz());
    CHECK(p.generation_cost() == generation_cost(column_counts(l)));
}

TEST_CASE("SSPAI fixtures")
{
    const Vector d{2.0, 4.0};
    const auto diag = SparseMatrix::diagonal(d);
    for (const double fill : {0.5, 1.0, 3.0}) {
        const auto k = build_sspai(diag, {fill})->inverse();
        CHECK(oracle::dense(k).isApprox(Eigen::Vector2d(0.5, 0.25).asDiagonal().toDenseMatrix()));
    }
    const auto id = build_sspai_with_budget(SparseMatrix::identity(5), 1, "x");
    CHECK(id->inverse() == SparseMatrix::identity(5));

    const auto dd = oracle::random_dense_spd(10, 4);
    const auto a = oracle::sparse(dd);
    const auto full = build_sspai_with_budget(a, 10, "full");
    CHECK((oracle::dense(full->inverse()) - dd.inverse()).cwiseAbs().maxCoeff() <= 1e-8);
    CHECK(full->inverse().symmetric());
    CHECK(full->apply_cost() == full->inverse().nnz());
    CHECK(full->fallback_columns() == 0);

    CHECK(sspai_column_budget(a, 1.0) == 10);
    const auto p = poisson2d(10);  // nnz / n = 4.6
    CHECK(sspai_column_budget(p, 0.5) == 2);
    CHECK(sspai_column_budget(p, 1.0) == 5);
    CHECK(sspai_column_budget(p, 3.0) == 14);
    CHECK(sspai_column_budget(SparseMatrix::identity(4), 0.5) == 1);
    CHECK(sspai_label({2.0}) == "sspai(fill=2)");
}

TEST_CASE("LU symmetrization adapter")
{
    const Vector du{4.0, 9.0};
    const auto r = symmetrize_lu(SparseMatrix::identity(2), du);
    REQUIRE(succeeded(r));
    CHECK(oracle::dense(lower_of(r)).isApprox(Eigen::Vector2d(2, 3).asDiagonal().toDenseMatrix()));
    const auto& m = *std::get<PreconditionerPtr>(r);
    CHECK(m.apply(Vector{4.0, 9.0}) == Vector{1.0, 1.0});

    const auto d = oracle::random_dense_spd(15, 6);
    // Without pivoting the unit lower factor comes from LLT scaled back by its diagonal.
    const Eigen::MatrixXd llt = Eigen::LLT<Eigen::MatrixXd>(d).matrixL();
    const Eigen::VectorXd piv = llt.diagonal();
    const Eigen::MatrixXd unit = llt * piv.cwiseInverse().asDiagonal();
    const Vector diag_u = oracle::to_std(piv.cwiseProduct(piv));
    const auto sym = symmetrize_lu(oracle::sparse(unit), diag_u);
    REQUIRE(succeeded(sym));
    const auto lp = oracle::dense(lower_of(sym));
    CHECK((lp * lp.transpose() - d).norm() <= 1e-10 * d.norm());
    CHECK(std::get<PreconditionerPtr>(sym)->apply_cost() == 2 * lower_of(sym).nnz());

    CHECK_FALSE(succeeded(symmetrize_lu(SparseMatrix::identity(2), Vector{1.0, 0.0})));
    CHECK_FALSE(succeeded(symmetrize_lu(SparseMatrix::identity(2), Vector{1.0, -2.0})));
}

TEST_CASE("augmented solve on the 2x2 example")
{
    const auto a = SparseMatrix::from_triplets(2, {{0, 0, 2}, {0, 1, -1}, {1, 0, -1}, {1, 1, 2}});
    const auto s = solve_augmented(a, Vector{1.0, 0.0});
    REQUIRE(s.status == SolveStatus::converged);
    CHECK(std::abs(s.x[0] - 2.0 / 3.0) <= 1e-8);
    CHECK(std::abs(s.x[1] - 1.0 / 3.0) <= 1e-8);

    const auto g = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 0, 2.0}, {1, 1, 5.0}});
    CHECK_THROWS_AS(solve_augmented(g, Vector{1.0, 0.0}), NotSdd);
}

TEST_CASE("Laplacian pipeline: same answer as plain PCG, rejection without lift")
{
    const auto raw = random_sdd(80, 0.05, 3);
    const auto sys = scale_and_symmetrize(raw);
    const auto r = build_laplacian_pipeline(sys.matrix, sys.scale, {1e-4, true});
    REQUIRE(succeeded(r));
    const auto& m = *std::get<PreconditionerPtr>(r);
    CHECK(m.label() == "laplacian(droptol=0.0001)");
    Xoshiro256pp rng(2);
    const auto b = oracle::random_vector(80, rng);
    PcgConfig cfg;
    cfg.rel_res_tol = 1e-12;
    const auto with = pcg(sys.matrix, b, m, cfg);
    const auto without = pcg(sys.matrix, b, *build_jacobi_control(80), cfg);
    REQUIRE(with.status == SolveStatus::converged);
    REQUIRE(without.status == SolveStatus::converged);
    const double scale = norm2(without.x);
    for (std::size_t i = 0; i < b.size(); ++i) {
        CHECK(std::abs(with.x[i] - without.x[i]) <= 1e-8 * scale);
    }
    CHECK(with.iters < without.iters);

    const auto g = SparseMatrix::from_triplets(2, {{0, 0, 1.0}, {0, 1, 0.9}, {1, 0, 0.9}, {1, 1, 1.0}});
    const auto nsdd = SparseMatrix::from_triplets(
        3, {{0, 0, 1.0}, {0, 1, 0.6}, {1, 0, 0.6}, {0, 2, 0.6}, {2, 0, 0.6}, {1, 1, 1.0}, {2, 2, 1.0}});
    const Vector ones(3, 1.0);
    CHECK(succeeded(build_laplacian_pipeline(g, Vector(2, 1.0), {1e-4, false})));
    CHECK_THROWS_AS(build_laplacian_pipeline(nsdd, ones, {1e-4, false}), NotSdd);
    const auto lifted = build_laplacian_pipeline(nsdd, ones, {1e-4, true});
    CHECK(succeeded(lifted));
}

TEST_CASE("unscaled-only SDD matrices go through the unscaled augmentation")
{
    const auto f = SparseMatrix::from_triplets(
        3, {{0, 0, 2.1}, {0, 1, 1.0}, {1, 0, 1.0}, {0, 2, 1.0}, {2, 0, 1.0}, {1, 1, 1.0}, {2, 2, 1.0}});
    const auto sys = scale_and_symmetrize(f);
    REQUIRE_FALSE(is_sdd(sys.matrix));
    const auto r = build_laplacian_pipeline(sys.matrix, sys.scale, {0.0, false});
    REQUIRE(succeeded(r));
    const auto op = operator_matrix(*std::get<PreconditionerPtr>(r));
    CHECK((op - op.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
    const auto back = unscale(sys.matrix, sys.scale);
    CHECK(back.symmetric());
    CHECK((oracle::dense(back) - oracle::dense(f)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("every default-grid configuration is a symmetric linear operator")
{
    const auto sys = scale_and_symmetrize(poisson2d(8));
    const auto& a = sys.matrix;
    const double two = estimate_two_norm(a);
    const auto grid = parse_config(R"({"matrices":[{"id":"m","generate":{"kind":"poisson2d","k":8}}]})").grid;
    const auto specs = expand_grid(grid, "m", "natural", estimate_jacobi_norm(a));
    CHECK(specs.size() == 48);
    Xoshiro256pp rng(99);
    for (const auto& spec : specs) {
        CAPTURE(spec.label);
        const auto built = build_preconditioner(spec, a, sys.scale, two);
        REQUIRE(succeeded(built));
        const auto& m = *std::get<PreconditionerPtr>(built);
        for (int pair = 0; pair < 20; ++pair) {
            const auto r = oracle::random_vector(64, rng);
            const auto s = oracle::random_vector(64, rng);
            const auto mr = m.apply(r);
            const auto ms = m.apply(s);
            const double lhs = dot(mr, s);
            const double rhs = dot(r, ms);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * norm2(mr) * norm2(s));
            Vector comb(64);
            for (std::size_t i = 0; i < comb.size(); ++i) {
                comb[i] = 1.7 * r[i] - 0.3 * s[i];
            }
            const auto mc = m.apply(comb);
            double err = 0.0;
            for (std::size_t i = 0; i < comb.size(); ++i) {
                err = std::max(err, std::abs(mc[i] - (1.7 * mr[i] - 0.3 * ms[i])));
            }
            CHECK(err <= 1e-10 * std::max(norm_inf(mc), 1.0));
        }
    }
}
