// Copyright 2026 The robustbeam Authors
// SPDX-License-Identifier: Apache-2.0

#include "robustbeam/socp.hpp"

#include <Eigen/QR>
#include <cmath>
#include <limits>
#include <sstream>

namespace robustbeam {

namespace {

// Per-cone data after substituting x = x_p + Z y: u(y) = A_red y + b_eff,
// s(y) = d_red^T y + e_eff. A cone with zero rows in A carries only the
// scalar part and contributes a plain -log(s) barrier term.
struct ReducedCone {
    RealMat a;
    RealVec b;
    RealVec d;
    double e = 0.0;
    bool second_order = false;
};

struct BarrierEval {
    double value = 0.0;
    RealVec grad;
    RealMat hess;
    bool interior = false;
};

// Evaluates the barrier-augmented objective
//   F(y) = -t c_red^T y + sum_i phi_i(y)
// with phi = -log(s^2 - ||u||^2) for second-order blocks and -log(s) for
// linear ones. interior=false means some block is at or past its boundary
// (the caller treats the point as unusable).
BarrierEval eval_barrier(const std::vector<ReducedCone>& cones, const RealVec& c_red, double t,
                         const RealVec& y, bool with_derivs) {
    const Eigen::Index n = y.size();
    BarrierEval out;
    out.value = -t * c_red.dot(y);
    if (with_derivs) {
        out.grad = -t * c_red;
        out.hess = RealMat::Zero(n, n);
    }
    for (const auto& cone : cones) {
        const double s = cone.d.dot(y) + cone.e;
        if (!cone.second_order) {
            if (s <= 0.0) {
                return out;
            }
            out.value -= std::log(s);
            if (with_derivs) {
                out.grad -= cone.d / s;
                out.hess += (cone.d * cone.d.transpose()) / (s * s);
            }
            continue;
        }
        const RealVec u = cone.a * y + cone.b;
        const double r = s * s - u.squaredNorm();
        if (s <= 0.0 || r <= 0.0) {
            return out;
        }
        out.value -= std::log(r);
        if (with_derivs) {
            // grad(-log r) = -(grad r)/r with grad r = 2 s d - 2 A^T u;
            // hess adds -(hess r)/r + (grad r)(grad r)^T / r^2.
            const RealVec grad_r = 2.0 * s * cone.d - 2.0 * cone.a.transpose() * u;
            out.grad -= grad_r / r;
            out.hess += (2.0 * cone.a.transpose() * cone.a - 2.0 * cone.d * cone.d.transpose()) / r;
            out.hess += (grad_r * grad_r.transpose()) / (r * r);
        }
    }
    out.interior = true;
    return out;
}

bool finite(const RealVec& v) {
    return v.allFinite();
}

} // namespace

SocpData build_socp(const Scenario& sc) {
    const Eigen::Index n = sc.hs.size();
    const Mat q = whitening_map(sc.uncertainty.r);
    const Vec hs_aligned = phase_align(sc.hs, sc.uncertainty.h0);
    const RealVec h0_re = realify(sc.uncertainty.h0);

    SocpData data;
    data.dim = static_cast<int>(2 * n);
    data.c = realify(hs_aligned);

    SocpCone norm_cone;
    norm_cone.a = RealMat::Identity(2 * n, 2 * n);
    norm_cone.b = RealVec::Zero(2 * n);
    norm_cone.d = RealVec::Zero(2 * n);
    norm_cone.e = std::sqrt(sc.p_bar);
    data.cones.push_back(std::move(norm_cone));

    // sqrt(eps)||Q w|| +- Re(h0^H w) <= sqrt(p_t). With eps = 0 the norm
    // part vanishes and each cone degenerates to a linear inequality,
    // encoded as a zero-row A block to keep the barrier smooth.
    RealMat a_block;
    RealVec b_block;
    if (sc.uncertainty.epsilon > 0.0) {
        a_block = std::sqrt(sc.uncertainty.epsilon) * realify_op(q);
        b_block = RealVec::Zero(2 * n);
    } else {
        a_block = RealMat(0, 2 * n);
        b_block = RealVec(0);
    }
    SocpCone plus;
    plus.a = a_block;
    plus.b = b_block;
    plus.d = -h0_re;
    plus.e = std::sqrt(sc.p_t);
    data.cones.push_back(plus);
    SocpCone minus;
    minus.a = std::move(a_block);
    minus.b = std::move(b_block);
    minus.d = h0_re;
    minus.e = std::sqrt(sc.p_t);
    data.cones.push_back(std::move(minus));

    SocpEq align;
    align.g = realify_check(sc.uncertainty.h0);
    align.value = 0.0;
    data.eq_rows.push_back(std::move(align));
    return data;
}

SocpData build_socp_phase_free(const Scenario& sc) {
    const Eigen::Index n = sc.hs.size();
    const Mat q = whitening_map(sc.uncertainty.r);
    const RealVec h0_re = realify(sc.uncertainty.h0);
    const RealVec h0_check = realify_check(sc.uncertainty.h0);
    const Eigen::Index dim = 2 * n + 1;
    const double half_cap = 0.5 * std::sqrt(sc.p_t);

    SocpData data;
    data.dim = static_cast<int>(dim);
    data.c = RealVec::Zero(dim);
    data.c.head(2 * n) = realify(sc.hs);

    SocpCone norm_cone;
    norm_cone.a = RealMat::Zero(2 * n, dim);
    norm_cone.a.leftCols(2 * n) = RealMat::Identity(2 * n, 2 * n);
    norm_cone.b = RealVec::Zero(2 * n);
    norm_cone.d = RealVec::Zero(dim);
    norm_cone.e = std::sqrt(sc.p_bar);
    data.cones.push_back(std::move(norm_cone));

    // |h0^H w| <= t with t = t' + sqrt(p_t)/2: the two rows carry the real
    // and imaginary parts of h0^H w.
    SocpCone amplitude;
    amplitude.a = RealMat::Zero(2, dim);
    amplitude.a.row(0).head(2 * n) = h0_re.transpose();
    amplitude.a.row(1).head(2 * n) = h0_check.transpose();
    amplitude.b = RealVec::Zero(2);
    amplitude.d = RealVec::Zero(dim);
    amplitude.d(dim - 1) = 1.0;
    amplitude.e = half_cap;
    data.cones.push_back(std::move(amplitude));

    // sqrt(eps)||Q w|| <= sqrt(p_t) - t.
    SocpCone cap;
    if (sc.uncertainty.epsilon > 0.0) {
        cap.a = RealMat::Zero(2 * n, dim);
        cap.a.leftCols(2 * n) = std::sqrt(sc.uncertainty.epsilon) * realify_op(q);
        cap.b = RealVec::Zero(2 * n);
    } else {
        cap.a = RealMat(0, dim);
        cap.b = RealVec(0);
    }
    cap.d = RealVec::Zero(dim);
    cap.d(dim - 1) = -1.0;
    cap.e = half_cap;
    data.cones.push_back(std::move(cap));
    return data;
}

SolverReport solve_socp(const SocpData& data, const SolverOptions& opts) {
    SolverReport report;
    const Eigen::Index dim = data.dim;
    const Eigen::Index n_eq = static_cast<Eigen::Index>(data.eq_rows.size());

    // Problem scale for the relative tolerances: ||c|| times the constant
    // of the leading (norm-budget) cone.
    double scale = data.c.norm();
    if (!data.cones.empty()) {
        scale *= std::abs(data.cones.front().e);
    }
    if (!(scale > 0.0)) {
        scale = 1.0;
    }
    const double gap_target = opts.tol_gap * scale;

    // Eliminate equalities: x = x_p + Z y with Z an orthonormal basis of
    // the joint null space and x_p the minimum-norm particular solution.
    RealMat z;
    RealVec x_p = RealVec::Zero(dim);
    if (n_eq > 0) {
        RealMat g(n_eq, dim);
        RealVec values(n_eq);
        for (Eigen::Index k = 0; k < n_eq; ++k) {
            const double norm = data.eq_rows[static_cast<std::size_t>(k)].g.norm();
            if (!(norm > 0.0)) {
                report.status = SolveStatus::NumericalFailure;
                return report;
            }
            g.row(k) = data.eq_rows[static_cast<std::size_t>(k)].g.transpose() / norm;
            values(k) = data.eq_rows[static_cast<std::size_t>(k)].value / norm;
        }
        Eigen::HouseholderQR<RealMat> qr(g.transpose());
        const RealMat full_q = qr.householderQ();
        z = full_q.rightCols(dim - n_eq);
        x_p = g.transpose() * (g * g.transpose()).ldlt().solve(values);
    } else {
        z = RealMat::Identity(dim, dim);
    }
    const Eigen::Index red = z.cols();

    // Reduce every cone into y coordinates.
    std::vector<ReducedCone> cones;
    cones.reserve(data.cones.size());
    double nu_total = 0.0; // barrier parameter sum: 2 per cone, 1 per linear
    for (const auto& cone : data.cones) {
        ReducedCone rc;
        rc.second_order = cone.a.rows() > 0;
        if (rc.second_order) {
            rc.a = cone.a * z;
            rc.b = cone.a * x_p + cone.b;
            nu_total += 2.0;
        } else {
            nu_total += 1.0;
        }
        rc.d = z.transpose() * cone.d;
        rc.e = cone.d.dot(x_p) + cone.e;
        cones.push_back(std::move(rc));
    }
    const RealVec c_red = z.transpose() * data.c;

    RealVec y = RealVec::Zero(red);
    {
        const BarrierEval probe = eval_barrier(cones, c_red, 1.0, y, false);
        if (!probe.interior) {
            report.status = SolveStatus::NumericalFailure;
            return report;
        }
    }

    double t = 1.0;
    constexpr double kBarrierGrowth = 10.0;
    constexpr double kArmijo = 0.25;
    constexpr double kBacktrack = 0.5;
    constexpr double kDecrementTol = 1e-10;
    constexpr int kMaxOuter = 64;
    int iterations = 0;
    bool converged = false;
    bool failed = false;

    for (int outer = 0; outer < kMaxOuter; ++outer) {
        // Center at the current barrier parameter.
        while (iterations < opts.max_iter) {
            const BarrierEval cur = eval_barrier(cones, c_red, t, y, true);
            if (!cur.interior || !std::isfinite(cur.value) || !finite(cur.grad)) {
                failed = true;
                break;
            }
            Eigen::LDLT<RealMat> ldlt(cur.hess);
            if (ldlt.info() != Eigen::Success) {
                failed = true;
                break;
            }
            const RealVec step_dir = ldlt.solve(-cur.grad);
            if (!finite(step_dir)) {
                failed = true;
                break;
            }
            const double decrement = -cur.grad.dot(step_dir);
            if (decrement <= kDecrementTol * std::max(1.0, std::abs(cur.value))) {
                break; // centered
            }
            ++iterations;

            double step = 1.0;
            bool advanced = false;
            while (step > 1e-20) {
                const RealVec trial = y + step * step_dir;
                const BarrierEval te = eval_barrier(cones, c_red, t, trial, false);
                if (te.interior && std::isfinite(te.value) &&
                    te.value <= cur.value - kArmijo * step * decrement) {
                    y = trial;
                    advanced = true;
                    break;
                }
                step *= kBacktrack;
            }
            if (!advanced) {
                // Line search hit its floor; the point is as centered as
                // rounding allows.
                break;
            }
        }
        if (failed) {
            break;
        }
        const double gap = nu_total / t;
        report.gap_history.push_back(gap);
        if (gap <= gap_target) {
            converged = true;
            break;
        }
        if (iterations >= opts.max_iter) {
            break;
        }
        t *= kBarrierGrowth;
    }

    report.x_opt = x_p + z * y;
    report.objective = data.c.dot(report.x_opt);
    report.iterations = iterations;
    report.duality_gap = nu_total / t;
    if (failed || !finite(report.x_opt)) {
        report.status = SolveStatus::NumericalFailure;
        return report;
    }

    // Residual audit: interior iterates keep cones strictly satisfied and
    // the elimination keeps equalities at rounding level, but the status
    // contract re-checks both rather than assuming it.
    double worst_residual = 0.0;
    for (const auto& cone : data.cones) {
        const double s = cone.d.dot(report.x_opt) + cone.e;
        const double lhs = cone.a.rows() > 0 ? (cone.a * report.x_opt + cone.b).norm() : 0.0;
        worst_residual = std::max(worst_residual, lhs - s);
    }
    for (const auto& eq : data.eq_rows) {
        const double norm = eq.g.norm();
        worst_residual =
            std::max(worst_residual, std::abs(eq.g.dot(report.x_opt) - eq.value) / norm);
    }
    if (converged && worst_residual <= opts.tol_feas * scale) {
        report.status = SolveStatus::Optimal;
    } else {
        report.status = SolveStatus::MaxIterations;
    }
    return report;
}

BeamSolution recover_solution(const SolverReport& report, const Scenario& sc) {
    if (report.status != SolveStatus::Optimal) {
        throw NotOptimal("recover_solution: solver report is not Optimal");
    }
    const Eigen::Index n = sc.hs.size();
    const Vec w = derealify(report.x_opt.head(2 * n));
    BeamSolution sol;
    sol.p = w.squaredNorm();
    if (sol.p <= 1e-300) {
        sol.p = 0.0;
        sol.v = sc.hs / sc.hs.norm();
        sol.rate = 0.0;
        sol.case_tag = CaseTag::PowerOnly;
        sol.worst_interference = 0.0;
        return sol;
    }
    sol.v = w / w.norm();
    sol.rate = rate_of(sol.p, sol.v, sc.hs);
    sol.worst_interference = worst_case_interference(sol.p, sol.v, sc.uncertainty);

    // Tightness classification at a 1e-6 relative band; an interior-point
    // iterate never sits exactly on a boundary, so fall back to whichever
    // constraint is relatively closer when neither lands in the band.
    const double power_gap = std::abs(sol.p - sc.p_bar) / sc.p_bar;
    const double intf_gap = std::abs(sol.worst_interference - sc.p_t) / sc.p_t;
    const bool power_tight = power_gap <= 1e-6;
    const bool intf_tight = intf_gap <= 1e-6;
    if (power_tight && intf_tight) {
        sol.case_tag = CaseTag::BothActive;
    } else if (power_tight) {
        sol.case_tag = CaseTag::PowerOnly;
    } else if (intf_tight) {
        sol.case_tag = CaseTag::InterferenceOnly;
    } else {
        sol.case_tag = power_gap <= intf_gap ? CaseTag::PowerOnly : CaseTag::InterferenceOnly;
    }
    return sol;
}

double kkt_stationarity_residual(const SocpData& data, const RealVec& x, double active_slack) {
    std::vector<RealVec> active_grads;
    for (const auto& cone : data.cones) {
        const double s = cone.d.dot(x) + cone.e;
        const double cone_scale = std::max(1.0, std::abs(cone.e));
        if (cone.a.rows() > 0) {
            const RealVec u = cone.a * x + cone.b;
            const double nu = u.norm();
            if (s - nu <= active_slack * cone_scale && nu > 1e-14) {
                active_grads.push_back(cone.a.transpose() * (u / nu) - cone.d);
            }
        } else if (s <= active_slack * cone_scale) {
            active_grads.push_back(-cone.d);
        }
    }

    const Eigen::Index n_eq = static_cast<Eigen::Index>(data.eq_rows.size());
    const std::size_t k = active_grads.size();
    const double c_norm = std::max(data.c.norm(), 1e-300);
    double best = std::numeric_limits<double>::infinity();

    // Few constraints, so enumerate active subsets and keep the best
    // least-squares fit whose cone multipliers are nonnegative. Equality
    // multipliers are free and always included.
    for (std::size_t mask = 0; mask < (1u << k); ++mask) {
        std::vector<std::size_t> chosen;
        for (std::size_t i = 0; i < k; ++i) {
            if (mask & (1u << i)) {
                chosen.push_back(i);
            }
        }
        const Eigen::Index cols = static_cast<Eigen::Index>(chosen.size()) + n_eq;
        double residual;
        if (cols == 0) {
            residual = data.c.norm();
        } else {
            RealMat basis(x.size(), cols);
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                basis.col(static_cast<Eigen::Index>(i)) = active_grads[chosen[i]];
            }
            for (Eigen::Index j = 0; j < n_eq; ++j) {
                basis.col(static_cast<Eigen::Index>(chosen.size()) + j) =
                    data.eq_rows[static_cast<std::size_t>(j)].g;
            }
            const RealVec coeffs = basis.colPivHouseholderQr().solve(data.c);
            bool nonneg = true;
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                if (coeffs(static_cast<Eigen::Index>(i)) < -1e-12 * c_norm) {
                    nonneg = false;
                    break;
                }
            }
            if (!nonneg) {
                continue;
            }
            residual = (data.c - basis * coeffs).norm();
        }
        best = std::min(best, residual);
    }
    return best / c_norm;
}

std::string dump_socp(const SocpData& data) {
    std::ostringstream out;
    out << "socp dim=" << data.dim << " cones=" << data.cones.size()
        << " eqs=" << data.eq_rows.size() << "\n";
    for (std::size_t i = 0; i < data.cones.size(); ++i) {
        const auto& cone = data.cones[i];
        out << "cone " << i << ": rows=" << cone.a.rows() << " |d|=" << cone.d.norm()
            << " e=" << cone.e << "\n";
    }
    for (std::size_t i = 0; i < data.eq_rows.size(); ++i) {
        out << "eq " << i << ": |g|=" << data.eq_rows[i].g.norm()
            << " value=" << data.eq_rows[i].value << "\n";
    }
    return out.str();
}

} // namespace robustbeam
