#include "qtf/solver.hpp"

#include <cmath>

#include "qtf/littlewood_paley.hpp"
#include "qtf/operators.hpp"
#include "qtf/osgood.hpp"

namespace qtf {

void StepperConfig::validate() const {
    if (dt <= 0.0) throw std::invalid_argument("StepperConfig: dt must be > 0");
    if (t_final < 0.0) throw std::invalid_argument("StepperConfig: t_final >= 0");
    if (cadence < 1) throw std::invalid_argument("StepperConfig: cadence >= 1");
    if (reg.enabled) {
        if (reg.n < 1) throw std::invalid_argument("StepperConfig: reg.n >= 1");
        if (reg.eps <= 0.0) throw std::invalid_argument("StepperConfig: reg.eps > 0");
    }
}

namespace {

struct Tendencies {
    Field Nq;  // dQ/dt minus Gamma L Lap Q (minus Gamma a Q when folded)
    Field Nu;  // du/dt minus nu Lap u
};

// Everything both equations need from one snapshot, computed once.
Tendencies explicit_tendencies(const SimState& s, const ModelParams& p,
                               const Regularization& reg, bool fold_a) {
    const auto grid = s.Q.grid();
    const int d = grid->dim();
    const int dt = s.Q.shape()[0];

    const Field u_adv = reg.enabled ? mollify(s.u, reg.eps) : s.u;

    const Field gradQ = gradient(s.Q);
    const StrainRotation sr = strain_rotation(u_adv);

    PhysArray Qp = to_phys(s.Q);
    PhysArray u_advp = to_phys(u_adv);
    PhysArray gradQp = to_phys(gradQ);
    PhysArray Qplus = pw::axpy(Qp, 1.0 / dt, pw::identity(grid, dt));

    PhysArray Dp = to_phys(sr.D);
    PhysArray Omp = to_phys(sr.Omega);
    PhysArray gup = pw::add(Dp, Omp);
    if (dt != d) {
        Dp = pw::embed_matrix(Dp, dt);
        Omp = pw::embed_matrix(Omp, dt);
        gup = pw::embed_matrix(gup, dt);
    }

    auto Jn = [&](Field f) {
        if (reg.enabled) f = spectral_cutoff(f, reg.n);
        return f;
    };

    // ---- molecular field ----------------------------------------------
    // unregularized: H = L Lap Q + F(Q)
    // regularized:   Hbar = L Lap Q - aQ + b Jn[Q^2 - tr(Jn Q^2)/d Id]
    //                                 - c Jn(Q tr Q^2)
    Field Q2 = to_spectral(pw::matmul(Qp, Qp));
    Field trQ2(grid, {});
    for (int i = 0; i < dt; ++i) {
        const auto* diag = Q2.comp(Q2.cidx(i, i));
        auto* dst = trQ2.comp(0);
        for (std::size_t m = 0; m < trQ2.num_modes(); ++m) dst[m] += diag[m];
    }
    PhysArray trQ2p = to_phys(trQ2);
    Field cubic = to_spectral(pw::mul_scalar_field(trQ2p, Qp));

    Field bulk(grid, {dt, dt});
    if (reg.enabled) {
        Field JQ2 = Jn(Q2);
        Field trJQ2(grid, {});
        for (int i = 0; i < dt; ++i) {
            const auto* diag = JQ2.comp(JQ2.cidx(i, i));
            auto* dst = trJQ2.comp(0);
            for (std::size_t m = 0; m < trJQ2.num_modes(); ++m) dst[m] += diag[m];
        }
        Field bterm = Q2;
        for (int i = 0; i < dt; ++i) {
            auto* diag = bterm.comp(bterm.cidx(i, i));
            const auto* tr = trJQ2.comp(0);
            for (std::size_t m = 0; m < bterm.num_modes(); ++m)
                diag[m] -= tr[m] / double(dt);
        }
        bulk = p.b * Jn(bterm) - p.c * Jn(cubic);
    } else {
        Field bterm = Q2;
        for (int i = 0; i < dt; ++i) {
            auto* diag = bterm.comp(bterm.cidx(i, i));
            const auto* tr = trQ2.comp(0);
            for (std::size_t m = 0; m < bterm.num_modes(); ++m)
                diag[m] -= tr[m] / double(dt);
        }
        bulk = p.b * bterm - p.c * cubic;
    }
    Field F = bulk - p.a * s.Q;
    Field H = p.L * laplacian(s.Q) + F;
    PhysArray Hp = to_phys(H);

    // ---- Q tendency ------------------------------------------------------
    // S(grad u_adv, Q), each block wrapped by Jn in the regularized variant
    PhysArray left = pw::axpy(Omp, p.xi, Dp);
    PhysArray right = pw::axpy(pw::scale(-1.0, Omp), p.xi, Dp);
    PhysArray trQgu = pw::contract(Qp, gup);

    Field S = Jn(to_spectral(pw::matmul(left, Qplus))) +
              Jn(to_spectral(pw::matmul(Qplus, right)));
    S -= 2.0 * p.xi * Jn(to_spectral(pw::mul_scalar_field(trQgu, Qplus)));

    Field convQ = Jn(to_spectral(pw::dot_last(gradQp, u_advp)));

    Field Nq = S - convQ + p.Gamma * F;
    if (fold_a) Nq += (p.Gamma * p.a) * s.Q;  // removed from explicit part

    // ---- u tendency ------------------------------------------------------
    // convection
    Field gradU = gradient(s.u);
    PhysArray gradUp = to_phys(gradU);
    Field convU = reg.enabled
                      ? Jn(to_spectral(pw::dot_last(gradUp, u_advp)))
                      : to_spectral(pw::dot_last(gradUp, to_phys(s.u)));

    // stress terms (tau + sigma), divergence taken spectrally
    Field trQH = to_spectral(pw::contract(Qp, Hp));
    PhysArray trQHp = to_phys(trQH);

    Field qh_sym = to_spectral(pw::add(pw::matmul(Qplus, Hp), pw::matmul(Hp, Qplus)));
    Field qh_tr = to_spectral(pw::mul_scalar_field(trQHp, Qplus));

    PhysArray odot = pw::zeros(grid, {d, d});
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            auto& dst = odot.comp[i * d + j];
            for (int a = 0; a < dt; ++a)
                for (int b = 0; b < dt; ++b) {
                    const auto& gi = gradQp.comp[(a * dt + b) * d + i];
                    const auto& gj = gradQp.comp[(a * dt + b) * d + j];
                    for (std::size_t m = 0; m < dst.size(); ++m)
                        dst[m] += gi[m] * gj[m];
                }
        }
    Field odot_f = to_spectral(dt == d ? odot : pw::embed_matrix(odot, dt));

    auto div_rows = [&](const Field& m) {
        // d_b m_{a b} over domain axes, first d rows
        Field out = Field::vector(grid);
        const int rows = m.shape()[0];
        double k[3];
        for (int a = 0; a < d; ++a) {
            auto* dst = out.comp(a);
            for (std::size_t i = 0; i < m.num_modes(); ++i) {
                grid->wavevector(i, k);
                std::complex<double> acc = 0.0;
                for (int b = 0; b < d; ++b)
                    acc += std::complex<double>(0.0, k[b]) *
                           m.comp(a * m.shape()[1] + b)[i];
                dst[i] = acc;
            }
            (void)rows;
        }
        return out;
    };

    Field Nu = Field::vector(grid);
    if (reg.enabled) {
        Nu -= leray_project(convU);
        Nu -= (p.lambda * p.xi) * leray_project(div_rows(Jn(qh_sym)));
        Nu += (2.0 * p.lambda * p.xi) * leray_project(div_rows(Jn(qh_tr)));
        Nu -= (p.L * p.lambda) * leray_project(Jn(div_rows(odot_f)));
        Nu += (p.L * p.lambda) * leray_project(div_rows(Jn(
            to_spectral(pw::sub(pw::matmul(Qp, to_phys(laplacian(s.Q))),
                                pw::matmul(to_phys(laplacian(s.Q)), Qp))))));

        Nu += epsilon_stabilizers(s, p, reg);
    } else {
        // tau + sigma with sigma = QH - HQ on the full molecular field
        Field sigma =
            to_spectral(pw::sub(pw::matmul(Qp, Hp), pw::matmul(Hp, Qp)));
        Field stress = (-p.xi) * qh_sym + (2.0 * p.xi) * qh_tr - p.L * odot_f;
        stress += sigma;
        Nu = leray_project((-1.0) * convU + p.lambda * div_rows(stress));
    }

    return {std::move(Nq), std::move(Nu)};
}

void apply_integrating_factor(Field& f, double coeff, double dt_step) {
    const auto& g = *f.grid();
    for (std::size_t i = 0; i < f.num_modes(); ++i) {
        const double e = std::exp(-coeff * g.k_squared(i) * dt_step);
        for (int c = 0; c < f.ncomp(); ++c) f.comp(c)[i] *= e;
    }
}

void enforce_structure(SimState& s) {
    s.Q = symmetrize_tracefree(s.Q);
    s.Q.apply_dealias();
    s.u = leray_project(s.u);
    s.u.apply_dealias();
}

SimState step_impl(const SimState& state, const ModelParams& p,
                   const StepperConfig& cfg, long step_index) {
    const bool fold_a = cfg.implicit_bulk_a && p.a > 0.0;
    const double aQ = fold_a ? p.Gamma * p.a : 0.0;

    auto propagate = [&](Field f, double diff_coeff, double zero_rate,
                         double dt_step) {
        apply_integrating_factor(f, diff_coeff, dt_step);
        if (zero_rate != 0.0) f *= std::exp(-zero_rate * dt_step);
        return f;
    };

    Tendencies k1 = explicit_tendencies(state, p, cfg.reg, fold_a);
    SimState out;
    if (cfg.scheme == Scheme::imex1) {
        out.Q = propagate(state.Q + cfg.dt * k1.Nq, p.Gamma * p.L, aQ, cfg.dt);
        out.u = propagate(state.u + cfg.dt * k1.Nu, p.nu, 0.0, cfg.dt);
    } else {
        // integrating-factor Heun: y+ = E(y + dt/2 k1) + dt/2 k2,
        // k2 evaluated at the Euler predictor E(y + dt k1)
        SimState mid;
        mid.t = state.t + cfg.dt;
        mid.Q = propagate(state.Q + cfg.dt * k1.Nq, p.Gamma * p.L, aQ, cfg.dt);
        mid.u = propagate(state.u + cfg.dt * k1.Nu, p.nu, 0.0, cfg.dt);
        enforce_structure(mid);
        Tendencies k2 = explicit_tendencies(mid, p, cfg.reg, fold_a);
        out.Q = propagate(state.Q + (0.5 * cfg.dt) * k1.Nq, p.Gamma * p.L, aQ,
                          cfg.dt) +
                (0.5 * cfg.dt) * k2.Nq;
        out.u = propagate(state.u + (0.5 * cfg.dt) * k1.Nu, p.nu, 0.0, cfg.dt) +
                (0.5 * cfg.dt) * k2.Nu;
    }
    out.t = state.t + cfg.dt;
    enforce_structure(out);
    if (!out.Q.finite() || !out.u.finite())
        throw SolverAbort(step_index, "non-finite state detected");
    return out;
}

// Fused diagnostics: one pass over shared physical-space views. Matches the
// generic free_energy / dissipation_rate / lp_norm routes to roundoff (unit
// tested), at a fraction of the transform count.
DiagnosticsRow make_row(const SimState& s, const ModelParams& p, double M,
                        double dt_cfl) {
    DiagnosticsRow r;
    r.t = s.t;
    const auto& g = *s.Q.grid();
    const int dt = s.Q.shape()[0];
    const std::size_t n = g.num_points();
    const double w = g.volume() / static_cast<double>(n);

    const double un = s.u.norm_l2();
    r.kinetic = 0.5 * un * un;
    r.l2_u = un;

    const double qn = s.Q.norm_l2();
    const double gq = gradient(s.Q).norm_l2();  // spectral Parseval
    r.l2_Q = qn;
    r.grad_Q = gq;
    r.h1_Q = std::sqrt(qn * qn + gq * gq);

    // potential terms and |Q|_L4^4, |Q|_L6^6 share the pointwise view of Q
    const auto qp = s.Q.to_physical();
    double pot = 0.0, l4 = 0.0, l6 = 0.0;
    std::vector<double> qv(dt * dt);
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < dt * dt; ++c) qv[c] = qp[c][i];
        double tr2 = 0.0, tr3 = 0.0;
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b) {
                tr2 += qv[a * dt + b] * qv[b * dt + a];
                for (int k = 0; k < dt; ++k)
                    tr3 += qv[a * dt + b] * qv[b * dt + k] * qv[k * dt + a];
            }
        pot += 0.5 * p.a * tr2 - p.b / 3.0 * tr3 + 0.25 * p.c * tr2 * tr2;
        l4 += tr2 * tr2;
        l6 += tr2 * tr2 * tr2;
    }
    r.free_energy = 0.5 * p.L * gq * gq + w * pot;
    r.energy = r.kinetic + p.lambda * r.free_energy;
    r.l4_Q = std::pow(w * l4, 0.25);
    r.l6_Q = std::pow(w * l6, 1.0 / 6.0);

    r.visc = p.nu * std::pow(gradient(s.u).norm_l2(), 2);
    {
        // same staged-dealias route as the solver tendencies
        const double hn = molecular_field(s.Q, p).norm_l2();
        r.rot = p.Gamma * p.lambda * hn * hn;
    }

    r.max_u = s.u.max_abs_physical();
    r.shifted_energy = r.energy + M * qn * qn;
    r.cfl_flag = r.max_u * dt_cfl / g.spacing() > 1.0;
    return r;
}

}  // namespace

Field epsilon_stabilizers(const SimState& state, const ModelParams& p,
                          const Regularization& reg) {
    (void)p;
    const auto grid = state.Q.grid();
    if (!reg.enabled) return Field::vector(grid);
    const int d = grid->dim();
    const int dt = state.Q.shape()[0];

    auto Jn = [&](Field f) { return spectral_cutoff(f, reg.n); };
    auto div_rows = [&](const Field& m) {
        Field out = Field::vector(grid);
        double k[3];
        for (int a = 0; a < d; ++a) {
            auto* dst = out.comp(a);
            for (std::size_t i = 0; i < m.num_modes(); ++i) {
                grid->wavevector(i, k);
                std::complex<double> acc = 0.0;
                for (int b = 0; b < d; ++b)
                    acc += std::complex<double>(0.0, k[b]) *
                           m.comp(a * m.shape()[1] + b)[i];
                dst[i] = acc;
            }
        }
        return out;
    };

    const Field u_moll = mollify(state.u, reg.eps);
    PhysArray u_advp = to_phys(u_moll);
    PhysArray gradQp = to_phys(gradient(state.Q));
    const std::size_t n = grid->num_points();

    // (i)  -eps P Jn R_eps( sum_lm gradQ_lm (R_eps u . gradQ_lm) |R_eps u gradQ| )
    PhysArray udotgQ = pw::zeros(grid, {dt, dt});
    for (int c = 0; c < dt * dt; ++c)
        for (int axis = 0; axis < d; ++axis) {
            const auto& gc = gradQp.comp[c * d + axis];
            const auto& uc = u_advp.comp[axis];
            for (std::size_t m = 0; m < n; ++m)
                udotgQ.comp[c][m] += gc[m] * uc[m];
        }
    std::vector<double> normfac(n, 0.0);
    for (int c = 0; c < dt * dt; ++c)
        for (std::size_t m = 0; m < n; ++m)
            normfac[m] += udotgQ.comp[c][m] * udotgQ.comp[c][m];
    for (auto& v : normfac) v = std::sqrt(v);
    PhysArray eps1 = pw::zeros(grid, {d});
    for (int axis = 0; axis < d; ++axis) {
        auto& dst = eps1.comp[axis];
        for (int c = 0; c < dt * dt; ++c) {
            const auto& gc = gradQp.comp[c * d + axis];
            const auto& sc = udotgQ.comp[c];
            for (std::size_t m = 0; m < n; ++m)
                dst[m] += gc[m] * sc[m] * normfac[m];
        }
    }
    Field out = (-reg.eps) *
                leray_project(Jn(mollify(to_spectral(eps1), reg.eps)));

    // (ii) +eps P div Jn R_eps( grad(R_eps u) |grad(R_eps u)|^2 )
    PhysArray grup = to_phys(gradient(u_moll));
    std::vector<double> g2(n, 0.0);
    for (int c = 0; c < grup.ncomp(); ++c)
        for (std::size_t m = 0; m < n; ++m)
            g2[m] += grup.comp[c][m] * grup.comp[c][m];
    PhysArray eps2 = grup;
    for (int c = 0; c < eps2.ncomp(); ++c)
        for (std::size_t m = 0; m < n; ++m) eps2.comp[c][m] *= g2[m];
    out += reg.eps *
           leray_project(div_rows(mollify(Jn(to_spectral(eps2)), reg.eps)));
    return out;
}

Field rhs_Q(const SimState& state, const ModelParams& p,
            const Regularization& reg) {
    Tendencies t = explicit_tendencies(state, p, reg, false);
    return t.Nq + (p.Gamma * p.L) * laplacian(state.Q);
}

Field pressure_field(const SimState& state, const ModelParams& p,
                     const Regularization& reg) {
    // unprojected momentum tendency assembled from the public operators
    const auto grid = state.u.grid();
    const int d = grid->dim();

    Field H = molecular_field(state.Q, p);
    Field stress = stress_tau(state.Q, H, gradient(state.Q), p);
    stress += stress_sigma(state.Q, H);

    const Field u_adv = reg.enabled ? mollify(state.u, reg.eps) : state.u;
    PhysArray gradUp = to_phys(gradient(state.u));
    Field conv = to_spectral(pw::dot_last(gradUp, to_phys(u_adv)));

    Field N = Field::vector(grid);
    double k[3];
    for (int a = 0; a < d; ++a) {
        auto* dst = N.comp(a);
        for (std::size_t i = 0; i < N.num_modes(); ++i) {
            grid->wavevector(i, k);
            std::complex<double> div_stress = 0.0;
            for (int b = 0; b < d; ++b)
                div_stress += std::complex<double>(0.0, k[b]) *
                              stress.comp(a * stress.shape()[1] + b)[i];
            dst[i] = -conv.comp(a)[i] + p.lambda * div_stress;
        }
    }
    if (reg.enabled) N = spectral_cutoff(N, reg.n);

    Field pr(grid, {});
    for (std::size_t i = 0; i < pr.num_modes(); ++i) {
        const double ksq = grid->k_squared(i);
        if (ksq == 0.0) continue;
        grid->wavevector(i, k);
        std::complex<double> kdotn = 0.0;
        for (int a = 0; a < d; ++a) kdotn += k[a] * N.comp(a)[i];
        pr.comp(0)[i] = std::complex<double>(0.0, 1.0) * kdotn / ksq;
    }
    return pr;
}

Field rhs_u(const SimState& state, const ModelParams& p,
            const Regularization& reg) {
    Tendencies t = explicit_tendencies(state, p, reg, false);
    return t.Nu + p.nu * laplacian(state.u);
}

SimState step(const SimState& state, const ModelParams& p,
              const StepperConfig& cfg) {
    p.validate();
    cfg.validate();
    return step_impl(state, p, cfg, 0);
}

RunSummary run(SimState state, const ModelParams& p, const StepperConfig& cfg,
               const DiagnosticsSink& sink, const SnapshotSink& snap) {
    p.validate();
    cfg.validate();
    const double M = choose_shift_M(p);
    const long nsteps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));

    RunSummary summary;
    summary.shift_M = M;
    summary.rows.push_back(make_row(state, p, M, cfg.dt));
    if (snap) snap(state);

    for (long s = 0; s < nsteps; ++s) {
        try {
            state = step_impl(state, p, cfg, s);
        } catch (SolverAbort& e) {
            throw SolverAbort(s, e.what());
        }
        if ((s + 1) % cfg.cadence == 0 || s + 1 == nsteps) {
            summary.rows.push_back(make_row(state, p, M, cfg.dt));
            if (snap) snap(state);
        }
    }
    summary.steps = nsteps;

    // energy-balance residual over diagnostic intervals: forward difference
    // in E, dissipation quadrature at the order of the stepper (rectangle for
    // imex1, trapezoid for imex2) so r carries the scheme's convergence order
    for (std::size_t i = 0; i + 1 < summary.rows.size(); ++i) {
        auto& r0 = summary.rows[i];
        const auto& r1 = summary.rows[i + 1];
        const double h = r1.t - r0.t;
        const double diss =
            cfg.scheme == Scheme::imex1
                ? r0.visc + r0.rot
                : 0.5 * (r0.visc + r0.rot + r1.visc + r1.rot);
        r0.residual = (r1.energy - r0.energy) / h + diss;
    }
    if (sink)
        for (const auto& r : summary.rows) sink(r);
    return summary;
}

TwinSummary twin_run(SimState a, SimState b, const ModelParams& p,
                     const StepperConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(*a.Q.grid() == *b.Q.grid()))
        throw std::invalid_argument("twin_run: grids differ");

    const long nsteps = static_cast<long>(std::llround(cfg.t_final / cfg.dt));
    TwinSummary summary;
    summary.steps = nsteps;

    // Phi and dissipation quantities in the direct multiplier backend; both
    // states advance through the identical code path so Phi measures state
    // divergence only.
    auto observe = [&](const SimState& sa, const SimState& sb) {
        TwinRow r;
        r.t = sa.t;
        const Field du = sa.u - sb.u;
        const Field dQ = sa.Q - sb.Q;
        auto hm_half_sq = [](const Field& f) {
            const double n = sobolev_norm_direct(f, -0.5);
            return n * n;
        };
        r.phi = 0.5 / p.lambda * hm_half_sq(du) + p.L * hm_half_sq(gradient(dQ));
        r.diss_u = p.nu / p.lambda * hm_half_sq(gradient(du));
        r.diss_Q = p.Gamma * p.L * p.L * hm_half_sq(laplacian(dQ));
        r.mu_phi = osgood_mu(r.phi);
        r.n_t = std::ceil(
            std::log(1.0 + std::exp(1.0) + 1.0 / std::max(r.phi, 1e-300)));
        return r;
    };

    summary.rows.push_back(observe(a, b));
    for (long s = 0; s < nsteps; ++s) {
        a = step_impl(a, p, cfg, s);
        b = step_impl(b, p, cfg, s);
        if ((s + 1) % cfg.cadence == 0 || s + 1 == nsteps)
            summary.rows.push_back(observe(a, b));
    }

    // discrete Phi' on each forward interval and the minimal nonnegative
    // chi making Phi' <= chi mu(Phi) hold; mu floored to dodge 0/0 at Phi = 0
    const double mu_floor = osgood_mu(1e-300);
    for (std::size_t i = 0; i + 1 < summary.rows.size(); ++i) {
        auto& r0 = summary.rows[i];
        const auto& r1 = summary.rows[i + 1];
        r0.dphi_dt = (r1.phi - r0.phi) / (r1.t - r0.t);
        r0.chi_emp = std::max(0.0, r0.dphi_dt) / std::max(r0.mu_phi, mu_floor);
    }
    return summary;
}

}  // namespace qtf
