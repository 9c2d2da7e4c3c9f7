// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include <robustbeam/analytic.hpp>
#include <robustbeam/rng.hpp>
#include <robustbeam/socp.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace rb = robustbeam;
using rb::Cplx;
using rb::Mat;
using rb::RealVec;
using rb::Vec;
using testsupport::iso_scenario;
using testsupport::random_vec;
using testsupport::rel_gap;
using testsupport::wishart_scenario;

namespace {

// Left-hand slack of one cone at x: (d^T x + e) - ||A x + b||.
double cone_slack(const rb::SocpCone& cone, const RealVec& x) {
    const double lhs = cone.a.rows() > 0 ? (cone.a * x + cone.b).norm() : 0.0;
    return cone.d.dot(x) + cone.e - lhs;
}

rb::Scenario loose_cap_scenario(std::uint64_t seed) {
    rb::Scenario sc = iso_scenario(seed, 3, 0.2, 1.0, 2.0);
    const double amp = sc.uncertainty.h0.norm() + std::sqrt(sc.uncertainty.epsilon);
    sc.p_t = 4.0 * sc.p_bar * amp * amp;
    return sc;
}

} // namespace

TEST(BuildSocp, ShapeAndOriginSlack) {
    const rb::Scenario sc = wishart_scenario(1, 3, 0.2, 2.0, 1.0);
    const rb::SocpData data = rb::build_socp(sc);
    EXPECT_EQ(data.dim, 6);
    ASSERT_EQ(data.cones.size(), 3u);
    ASSERT_EQ(data.eq_rows.size(), 1u);
    const RealVec origin = RealVec::Zero(6);
    EXPECT_NEAR(cone_slack(data.cones[0], origin), std::sqrt(sc.p_bar), 1e-12);
    EXPECT_NEAR(cone_slack(data.cones[1], origin), std::sqrt(sc.p_t), 1e-12);
    EXPECT_NEAR(cone_slack(data.cones[2], origin), std::sqrt(sc.p_t), 1e-12);
    EXPECT_EQ(data.eq_rows[0].value, 0.0);
    // The objective is the realified phase-aligned direct channel.
    const RealVec c_expected = rb::realify(rb::phase_align(sc.hs, sc.uncertainty.h0));
    EXPECT_LE((data.c - c_expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(BuildSocp, ConeEvaluationMatchesComplexForm) {
    const rb::Scenario sc = wishart_scenario(2, 3, 0.35, 2.0, 1.5);
    const rb::SocpData data = rb::build_socp(sc);
    const Mat q = rb::whitening_map(sc.uncertainty.r);
    rb::Rng rng(3);
    for (int k = 0; k < 100; ++k) {
        const Vec w = random_vec(rng, 3);
        const RealVec x = rb::realify(w);
        const double ell = std::sqrt(sc.uncertainty.epsilon) * (q * w).norm();
        const double re = std::real(sc.uncertainty.h0.dot(w));
        // Cones 1 and 2 encode sqrt(eps)||Qw|| +- Re(h0^H w) <= sqrt(p_t).
        const double slack1 = std::sqrt(sc.p_t) - (ell + re);
        const double slack2 = std::sqrt(sc.p_t) - (ell - re);
        EXPECT_LE(std::abs(cone_slack(data.cones[1], x) - slack1),
                  1e-12 * std::max(1.0, std::abs(slack1)));
        EXPECT_LE(std::abs(cone_slack(data.cones[2], x) - slack2),
                  1e-12 * std::max(1.0, std::abs(slack2)));
        // The equality row is the residual imaginary part Im(w^H h0).
        EXPECT_LE(std::abs(data.eq_rows[0].g.dot(x) - std::imag(w.dot(sc.uncertainty.h0))),
                  1e-12);
        // Cone 0 is the transmit-power norm bound.
        EXPECT_LE(std::abs(cone_slack(data.cones[0], x) - (std::sqrt(sc.p_bar) - w.norm())),
                  1e-12);
    }
}

TEST(BuildSocp, ZeroEpsilonCollapsesToLinearCones) {
    rb::Scenario sc = iso_scenario(4, 2, 0.2, 1.0, 1.0, 1.0);
    sc.uncertainty.epsilon = 0.0;
    const rb::SocpData data = rb::build_socp(sc);
    ASSERT_EQ(data.cones.size(), 3u);
    EXPECT_EQ(data.cones[1].a.rows(), 0);
    EXPECT_EQ(data.cones[2].a.rows(), 0);
    const rb::SolverReport report = rb::solve_socp(data);
    ASSERT_EQ(report.status, rb::SolveStatus::Optimal);
    // Without uncertainty the cap reads |Re(h0^H w)| <= sqrt(p_t).
    const Vec w = rb::derealify(report.x_opt);
    EXPECT_LE(std::abs(std::real(sc.uncertainty.h0.dot(w))),
              std::sqrt(sc.p_t) * (1.0 + 1e-6));
}

TEST(SolveSocp, PowerOnlyInstanceReachesBudgetObjective) {
    const rb::Scenario sc = loose_cap_scenario(5);
    const rb::SolverReport report = rb::solve_socp(rb::build_socp(sc));
    ASSERT_EQ(report.status, rb::SolveStatus::Optimal);
    const double expected = std::sqrt(sc.p_bar) * sc.hs.norm();
    EXPECT_LE(rel_gap(report.objective, expected), 1e-6);
    const rb::BeamSolution sol = rb::recover_solution(report, sc);
    EXPECT_LE(rel_gap(sol.p, sc.p_bar), 1e-6);
    EXPECT_GE(std::abs(sc.hs.dot(sol.v)), sc.hs.norm() * (1.0 - 1e-5));
    EXPECT_EQ(sol.case_tag, rb::CaseTag::PowerOnly);
}

TEST(SolveSocp, ObjectiveNonnegative) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const double p_t = (seed % 3 == 0) ? 1e-6 : 0.5;
        const rb::Scenario sc = wishart_scenario(10 + seed, 3, 0.2, 2.0, p_t);
        const rb::SolverReport report = rb::solve_socp(rb::build_socp(sc));
        ASSERT_EQ(report.status, rb::SolveStatus::Optimal) << "seed " << seed;
        EXPECT_GE(report.objective, -1e-12) << "seed " << seed;
    }
}

TEST(SolveSocp, GapHistoryNonincreasing) {
    const rb::Scenario sc = wishart_scenario(40, 3, 0.25, 2.0, 1.0);
    const rb::SolverReport report = rb::solve_socp(rb::build_socp(sc));
    ASSERT_EQ(report.status, rb::SolveStatus::Optimal);
    ASSERT_GE(report.gap_history.size(), 2u);
    for (std::size_t i = 1; i < report.gap_history.size(); ++i) {
        EXPECT_LE(report.gap_history[i], report.gap_history[i - 1] * (1.0 + 1e-12));
    }
    EXPECT_GT(report.iterations, 0);
}

TEST(SolveSocp, DeterministicRerun) {
    const rb::Scenario sc = wishart_scenario(41, 3, 0.3, 2.0, 0.8);
    const rb::SocpData data = rb::build_socp(sc);
    const rb::SolverReport a = rb::solve_socp(data);
    const rb::SolverReport b = rb::solve_socp(data);
    EXPECT_EQ(a.objective, b.objective);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ((a.x_opt - b.x_opt).cwiseAbs().maxCoeff(), 0.0);
}

TEST(SolveSocp, SolutionsFeasibleTightAndStationary) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const rb::Scenario sc = (seed % 2 == 0)
                                    ? iso_scenario(50 + seed, 3, 0.2, 1.0, 2.0, 0.8)
                                    : wishart_scenario(50 + seed, 3, 0.2, 2.0, 0.8);
        const rb::SocpData data = rb::build_socp(sc);
        const rb::SolverReport report = rb::solve_socp(data);
        ASSERT_EQ(report.status, rb::SolveStatus::Optimal) << "seed " << seed;
        const rb::BeamSolution sol = rb::recover_solution(report, sc);
        EXPECT_LE(sol.p, sc.p_bar * (1.0 + 1e-6)) << "seed " << seed;
        EXPECT_LE(rb::worst_case_interference(sol.p, sol.v, sc.uncertainty),
                  sc.p_t * (1.0 + 1e-6))
            << "seed " << seed;
        EXPECT_LE(rb::kkt_stationarity_residual(data, report.x_opt, 1e-6), 1e-5)
            << "seed " << seed;
    }
}

TEST(SolveSocp, MatchesAnalyticChainOnIsotropic) {
    int worst_seed = -1;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const double eps = 0.05 + 0.3 * static_cast<double>(seed % 4);
        const double p_bar = 1.0 + static_cast<double>(seed % 6);
        const double p_t = 0.4 + 0.3 * static_cast<double>(seed % 5);
        const rb::Scenario sc = iso_scenario(4000 + seed, 3, eps, 1.0, p_bar, p_t);
        const double analytic = rb::solve_p1(sc).rate;
        const rb::SolverReport report = rb::solve_socp(rb::build_socp(sc));
        ASSERT_EQ(report.status, rb::SolveStatus::Optimal) << "seed " << seed;
        const double gap = std::abs(rb::recover_solution(report, sc).rate - analytic);
        if (gap > worst) {
            worst = gap;
            worst_seed = static_cast<int>(seed);
        }
    }
    EXPECT_LE(worst, 1e-4) << "largest disagreement at seed " << worst_seed;
}

TEST(RecoverSolution, ZeroVectorMapsToZeroPower) {
    const rb::Scenario sc = iso_scenario(60, 3, 0.2, 1.0, 2.0, 1.0);
    rb::SolverReport report;
    report.x_opt = RealVec::Zero(6);
    report.status = rb::SolveStatus::Optimal;
    const rb::BeamSolution sol = rb::recover_solution(report, sc);
    EXPECT_EQ(sol.p, 0.0);
    EXPECT_EQ(sol.rate, 0.0);
    EXPECT_NEAR(sol.v.norm(), 1.0, 1e-12);
}

TEST(RecoverSolution, RequiresOptimalStatus) {
    const rb::Scenario sc = iso_scenario(61, 3, 0.2, 1.0, 2.0, 1.0);
    rb::SolverReport report;
    report.x_opt = RealVec::Zero(6);
    report.status = rb::SolveStatus::MaxIterations;
    EXPECT_THROW(rb::recover_solution(report, sc), rb::NotOptimal);
}

TEST(PhaseFree, ShapeAndPhaseInvariance) {
    rb::Scenario sc = wishart_scenario(70, 3, 0.25, 2.0, 0.9);
    const rb::SocpData data = rb::build_socp_phase_free(sc);
    EXPECT_EQ(data.dim, 7);
    EXPECT_EQ(data.cones.size(), 3u);
    EXPECT_TRUE(data.eq_rows.empty());
    const rb::SolverReport base = rb::solve_socp(data);
    ASSERT_EQ(base.status, rb::SolveStatus::Optimal);

    sc.hs *= std::exp(Cplx(0.0, 0.9));
    const rb::SolverReport rotated = rb::solve_socp(rb::build_socp_phase_free(sc));
    ASSERT_EQ(rotated.status, rb::SolveStatus::Optimal);
    EXPECT_LE(std::abs(rotated.objective - base.objective),
              1e-7 * std::max(1.0, base.objective));
}

TEST(PhaseFree, NeverBelowAlignedFormulation) {
    // Any solution of the aligned program is feasible for the phase-free
    // one, so the phase-free optimum dominates up to solver tolerance.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const rb::Scenario sc = (seed % 2 == 0)
                                    ? iso_scenario(80 + seed, 3, 0.2, 1.0, 2.0, 0.7)
                                    : wishart_scenario(80 + seed, 3, 0.2, 2.0, 0.7);
        const rb::SolverReport aligned = rb::solve_socp(rb::build_socp(sc));
        const rb::SolverReport free_form = rb::solve_socp(rb::build_socp_phase_free(sc));
        ASSERT_EQ(aligned.status, rb::SolveStatus::Optimal) << "seed " << seed;
        ASSERT_EQ(free_form.status, rb::SolveStatus::Optimal) << "seed " << seed;
        const double scale = std::max(1.0, aligned.objective);
        EXPECT_GE(free_form.objective, aligned.objective - 1e-6 * scale) << "seed " << seed;
    }
}

TEST(PhaseFree, RecoveredSolutionsStayFeasible) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const rb::Scenario sc = wishart_scenario(90 + seed, 3, 0.3, 2.0, 0.8);
        const rb::SolverReport report = rb::solve_socp(rb::build_socp_phase_free(sc));
        ASSERT_EQ(report.status, rb::SolveStatus::Optimal) << "seed " << seed;
        // The beam lives in the leading 2N entries; the trailing slot is
        // the shifted cap-splitting variable.
        const Vec w = rb::derealify(report.x_opt.head(6));
        const double p = w.squaredNorm();
        EXPECT_LE(p, sc.p_bar * (1.0 + 1e-6)) << "seed " << seed;
        if (p > 1e-12) {
            const Vec v = w / w.norm();
            EXPECT_LE(rb::worst_case_interference(p, v, sc.uncertainty),
                      sc.p_t * (1.0 + 1e-6))
                << "seed " << seed;
        }
    }
}
