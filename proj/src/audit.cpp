#include "qtf/audit.hpp"

#include <cmath>
#include <random>

#include "qtf/initial_conditions.hpp"
#include "qtf/littlewood_paley.hpp"
#include "qtf/operators.hpp"
#include "qtf/osgood.hpp"
#include "qtf/pointwise.hpp"

namespace qtf {

namespace {

// Pointwise snapshot of everything the energy-law ledger needs. Unlike the
// solver path, nothing here is dealiased: each labelled integral is a plain
// trapezoid quadrature of the pointwise integrand, so the algebraic
// cancellations are exercised independently of the production code.
struct LyapunovSnapshot {
    GridPtr grid;
    int d, dt;
    std::vector<std::vector<double>> u;      // [d]
    std::vector<std::vector<double>> gu;     // u_{a,b} = d_b u_a, [dt*dt] embedded
    std::vector<std::vector<double>> D, Om;  // embedded to dt x dt
    std::vector<std::vector<double>> Q;      // [dt*dt]
    std::vector<std::vector<double>> gQ;     // [dt*dt*d]
    std::vector<std::vector<double>> lapQ;   // [dt*dt]
    std::vector<std::vector<double>> F;      // bulk force, pointwise
    std::vector<std::vector<double>> H;      // L lapQ + F
    std::vector<double> trQgu, trQH, divu;
    double volume_weight;  // V / npts
};

LyapunovSnapshot make_snapshot(const Field& Qf, const Field& uf,
                               const ModelParams& p) {
    LyapunovSnapshot s;
    s.grid = Qf.grid();
    s.d = s.grid->dim();
    s.dt = Qf.shape()[0];
    const std::size_t n = s.grid->num_points();
    s.volume_weight = s.grid->volume() / static_cast<double>(n);

    s.u = uf.to_physical();
    s.Q = Qf.to_physical();
    s.gQ = gradient(Qf).to_physical();
    s.lapQ = laplacian(Qf).to_physical();
    s.divu = divergence(uf).to_physical()[0];

    const auto gu_d = gradient(uf).to_physical();  // [d*d]
    const int d = s.d, dt = s.dt;
    s.gu.assign(dt * dt, std::vector<double>(n, 0.0));
    s.D.assign(dt * dt, std::vector<double>(n, 0.0));
    s.Om.assign(dt * dt, std::vector<double>(n, 0.0));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            const auto& ab = gu_d[a * d + b];
            const auto& ba = gu_d[b * d + a];
            auto& dst = s.gu[a * dt + b];
            auto& dD = s.D[a * dt + b];
            auto& dO = s.Om[a * dt + b];
            for (std::size_t i = 0; i < n; ++i) {
                dst[i] = ab[i];
                dD[i] = 0.5 * (ab[i] + ba[i]);
                dO[i] = 0.5 * (ab[i] - ba[i]);
            }
        }

    s.F.assign(dt * dt, std::vector<double>(n, 0.0));
    s.H.assign(dt * dt, std::vector<double>(n, 0.0));
    s.trQgu.assign(n, 0.0);
    s.trQH.assign(n, 0.0);
    std::vector<double> q(dt * dt);
    for (std::size_t i = 0; i < n; ++i) {
        for (int c = 0; c < dt * dt; ++c) q[c] = s.Q[c][i];
        double tr2 = 0.0;
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b) tr2 += q[a * dt + b] * q[b * dt + a];
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b) {
                double q2ab = 0.0;
                for (int g = 0; g < dt; ++g) q2ab += q[a * dt + g] * q[g * dt + b];
                double f = -p.a * q[a * dt + b] + p.b * q2ab -
                           p.c * q[a * dt + b] * tr2;
                if (a == b) f -= p.b * tr2 / dt;
                s.F[a * dt + b][i] = f;
                s.H[a * dt + b][i] = p.L * s.lapQ[a * dt + b][i] + f;
            }
        double tg = 0.0, th = 0.0;
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b) {
                tg += q[a * dt + b] * s.gu[a * dt + b][i];
                th += q[a * dt + b] * s.H[a * dt + b][i];
            }
        s.trQgu[i] = tg;
        s.trQH[i] = th;
    }
    return s;
}

// quadrature of a pointwise integrand together with a cancellation-free
// magnitude reference (the constituent products are accumulated in absolute
// value BEFORE any index contraction, so identities that vanish pointwise
// still get an O(1) scale)
struct Integral {
    double value = 0.0;
    double mass = 0.0;
};

struct PointTerm {
    double value = 0.0;
    double mass = 0.0;
    void add(double piece) {
        value += piece;
        mass += std::abs(piece);
    }
};

template <typename F>
Integral integrate(const LyapunovSnapshot& s, F&& integrand) {
    Integral out;
    const std::size_t n = s.grid->num_points();
    for (std::size_t i = 0; i < n; ++i) {
        PointTerm t;
        integrand(i, t);
        out.value += t.value;
        out.mass += t.mass;
    }
    out.value *= s.volume_weight;
    out.mass *= s.volume_weight;
    return out;
}

struct LyapunovTerms {
    Integral I, II, A, AA, B, BB, C, CC, J1, J2, J3, JJ1, JJ2, JJ3;
};

LyapunovTerms lyapunov_terms(const LyapunovSnapshot& s, const ModelParams& p) {
    const int d = s.d, dt = s.dt;
    const double Ll = p.L * p.lambda;
    LyapunovTerms t;

    t.I = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b) {
                double conv = 0.0;
                for (int g = 0; g < d; ++g)
                    conv += s.u[g][i] * s.gQ[(a * dt + b) * d + g][i];
                pt.add(p.lambda * conv * s.F[a * dt + b][i]);
            }
    });

    t.II = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(p.lambda *
                           (-s.Om[a * dt + g][i] * s.Q[g * dt + b][i] +
                            s.Q[a * dt + g][i] * s.Om[g * dt + b][i]) *
                           s.F[a * dt + b][i]);
    });

    t.A = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < d; ++g)
                    pt.add(Ll * s.u[g][i] * s.gQ[(a * dt + b) * d + g][i] *
                           s.lapQ[a * dt + b][i]);
    });

    t.AA = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double gg = 0.0;
                for (int g = 0; g < dt; ++g)
                    for (int e = 0; e < dt; ++e)
                        gg += s.gQ[(g * dt + e) * d + a][i] *
                              s.gQ[(g * dt + e) * d + b][i];
                pt.add(Ll * gg * s.gu[a * dt + b][i]);
            }
    });

    t.B = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(-0.5 * Ll * s.gu[a * dt + g][i] *
                           s.Q[g * dt + b][i] * s.lapQ[a * dt + b][i]);
    });

    t.BB = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(Ll * s.lapQ[a * dt + g][i] * s.Q[g * dt + b][i] *
                           s.gu[a * dt + b][i]);
    });

    t.C = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(0.5 * Ll * s.gu[g * dt + a][i] *
                           s.Q[g * dt + b][i] * s.lapQ[a * dt + b][i]);
    });

    t.CC = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(-Ll * s.Q[a * dt + g][i] * s.lapQ[g * dt + b][i] *
                           s.gu[a * dt + b][i]);
    });

    auto qplus = [&](std::size_t i, int a, int b) {
        return s.Q[a * dt + b][i] + (a == b ? 1.0 / dt : 0.0);
    };

    t.J1 = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(qplus(i, a, g) * s.D[g * dt + b][i] *
                           s.H[a * dt + b][i]);
    });
    t.J2 = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(s.D[a * dt + g][i] * qplus(i, g, b) *
                           s.H[a * dt + b][i]);
    });
    t.J3 = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                pt.add(qplus(i, a, b) * s.H[a * dt + b][i] * s.trQgu[i]);
    });
    t.JJ1 = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(qplus(i, a, g) * s.H[g * dt + b][i] *
                           s.gu[a * dt + b][i]);
    });
    t.JJ2 = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                for (int g = 0; g < dt; ++g)
                    pt.add(s.H[a * dt + g][i] * qplus(i, g, b) *
                           s.gu[a * dt + b][i]);
    });
    t.JJ3 = integrate(s, [&](std::size_t i, PointTerm& pt) {
        for (int a = 0; a < dt; ++a)
            for (int b = 0; b < dt; ++b)
                pt.add(qplus(i, a, b) * s.gu[a * dt + b][i] * s.trQH[i]);
    });

    return t;
}

LedgerEntry check_zero(const std::string& name, double value, double mass,
                       double tol) {
    LedgerEntry e;
    e.identity = name;
    e.value = value;
    e.scale = std::max(mass, 1e-300);
    e.ratio = std::abs(value) / e.scale;
    e.pass = e.ratio <= tol || mass == 0.0;
    return e;
}

LedgerEntry check_nonzero(const std::string& name, double value, double mass,
                          double min_ratio) {
    LedgerEntry e;
    e.identity = name;
    e.value = value;
    e.scale = std::max(mass, 1e-300);
    e.ratio = std::abs(value) / e.scale;
    e.pass = e.ratio >= min_ratio;
    return e;
}

}  // namespace

AuditReport audit_lyapunov(const Field& Q, const Field& u, const ModelParams& p,
                           double tol) {
    const LyapunovSnapshot s = make_snapshot(Q, u, p);
    const LyapunovTerms t = lyapunov_terms(s, p);
    AuditReport rep;
    rep.add(check_zero("I", t.I.value, t.I.mass, tol));
    rep.add(check_zero("II", t.II.value, t.II.mass, tol));
    rep.add(check_zero("A+AA", t.A.value + t.AA.value,
                       t.A.mass + t.AA.mass, tol));
    rep.add(check_zero("2B+BB", 2.0 * t.B.value + t.BB.value,
                       2.0 * t.B.mass + t.BB.mass, tol));
    rep.add(check_zero("2C+CC", 2.0 * t.C.value + t.CC.value,
                       2.0 * t.C.mass + t.CC.mass, tol));
    rep.add(check_zero("J1+J2-JJ1-JJ2",
                       t.J1.value + t.J2.value - t.JJ1.value - t.JJ2.value,
                       t.J1.mass + t.J2.mass + t.JJ1.mass + t.JJ2.mass, tol));
    rep.add(check_zero("J3-JJ3", t.J3.value - t.JJ3.value,
                       t.J3.mass + t.JJ3.mass, tol));
    return rep;
}

AuditReport audit_lyapunov_controls(const Field& Q, const Field& u,
                                    const ModelParams& p, std::uint64_t seed,
                                    double min_ratio) {
    AuditReport rep;

    // broken hypothesis 1: u a pure gradient (div u != 0). Each identity that
    // rests on incompressibility pairs with div u through a specific scalar;
    // choosing lap(phi) = that scalar (mean removed) makes the broken value a
    // full square instead of a random overlap, so the control cannot go weak.
    const int ctrl_band = 4;
    auto adversarial_gradient = [&](const std::vector<double>& g) {
        Field gs;
        {
            PhysArray pa;
            pa.grid = Q.grid();
            pa.shape = {};
            pa.comp = {g};
            gs = to_spectral(pa, false);
        }
        Field phi(Q.grid(), {});
        const auto& gr = *Q.grid();
        for (std::size_t i = 0; i < phi.num_modes(); ++i) {
            const double ksq = gr.k_squared(i);
            phi.comp(0)[i] = ksq == 0.0 ? 0.0 : -gs.comp(0)[i] / ksq;
        }
        Field ug = gradient(phi);
        ug.apply_dealias();
        const double n = ug.norm_l2();
        if (n > 0.0) ug *= std::max(u.norm_l2(), 1.0) / n;
        return ug;
    };

    {
        const LyapunovSnapshot s0 = make_snapshot(Q, u, p);
        const std::size_t n = Q.grid()->num_points();
        const int dt = s0.dt;
        std::vector<double> psi(n), grad2(n), trqh(n);
        for (std::size_t i = 0; i < n; ++i) {
            double tr2 = 0.0, tr3 = 0.0, g2 = 0.0;
            for (int a = 0; a < dt; ++a)
                for (int b = 0; b < dt; ++b) {
                    tr2 += s0.Q[a * dt + b][i] * s0.Q[b * dt + a][i];
                    for (int k = 0; k < dt; ++k)
                        tr3 += s0.Q[a * dt + b][i] * s0.Q[b * dt + k][i] *
                               s0.Q[k * dt + a][i];
                }
            for (int c = 0; c < dt * dt * s0.d; ++c) g2 += s0.gQ[c][i] * s0.gQ[c][i];
            psi[i] = 0.5 * p.a * tr2 - p.b / 3.0 * tr3 + 0.25 * p.c * tr2 * tr2;
            grad2[i] = g2;
            trqh[i] = s0.trQH[i];
        }

        auto broken = [&](const std::vector<double>& target,
                          const std::string& name, auto&& extract) {
            const Field ug = adversarial_gradient(target);
            const LyapunovSnapshot s = make_snapshot(Q, ug, p);
            const LyapunovTerms t = lyapunov_terms(s, p);
            rep.add(extract(name, t));
        };
        broken(psi, "I|grad-u", [&](const std::string& nm, const LyapunovTerms& t) {
            return check_nonzero(nm, t.I.value, t.I.mass, min_ratio);
        });
        broken(grad2, "A+AA|grad-u",
               [&](const std::string& nm, const LyapunovTerms& t) {
                   return check_nonzero(nm, t.A.value + t.AA.value,
                                        t.A.mass + t.AA.mass, min_ratio);
               });
        broken(trqh, "J3-JJ3|grad-u",
               [&](const std::string& nm, const LyapunovTerms& t) {
                   return check_nonzero(nm, t.J3.value - t.JJ3.value,
                                        t.J3.mass + t.JJ3.mass, min_ratio);
               });
    }

    // broken hypothesis 2: Q with an off-diagonal (non-symmetric) defect.
    // The broken combinations are compared against their constituent values
    // (the absolute-mass scale of the pass checks would hide the break).
    auto asym_perturb = [&](const Field& Qin) {
        const int dt = Qin.shape()[0];
        const Field R = random_qtensor(Qin.grid(), dt,
                                       seed ^ 0x517cc1b727220a95ULL,
                                       std::max(Qin.norm_l2(), 1.0), 2.0,
                                       ctrl_band);
        PhysArray qp = to_phys(Qin);
        PhysArray rp = to_phys(R);
        const double amp = 1.0 * std::max(Qin.norm_l2(), 1.0) /
                           std::sqrt(Qin.grid()->volume());
        for (int i = 0; i < dt; ++i)
            for (int j = 0; j < dt; ++j) {
                if (i >= j) continue;  // perturb the upper triangle only
                auto& dst = qp.comp[i * dt + j];
                const auto& src = rp.comp[j * dt + i];
                for (std::size_t m = 0; m < dst.size(); ++m)
                    dst[m] += amp * src[m];
            }
        return to_spectral(qp, false);
    };
    {
        const Field Qa = asym_perturb(Q);
        const LyapunovSnapshot s = make_snapshot(Qa, u, p);
        const LyapunovTerms t = lyapunov_terms(s, p);
        auto cmax = [](std::initializer_list<double> vs) {
            double best = 1e-300;
            for (double v : vs) best = std::max(best, std::abs(v));
            return best;
        };
        rep.add(check_nonzero("2B+BB|asym-Q", 2.0 * t.B.value + t.BB.value,
                              cmax({2.0 * t.B.value, t.BB.value}), min_ratio));
        rep.add(check_nonzero("2C+CC|asym-Q", 2.0 * t.C.value + t.CC.value,
                              cmax({2.0 * t.C.value, t.CC.value}), min_ratio));
        rep.add(check_nonzero(
            "J1+J2-JJ1-JJ2|asym-Q",
            t.J1.value + t.J2.value - t.JJ1.value - t.JJ2.value,
            cmax({t.J1.value, t.J2.value, t.JJ1.value, t.JJ2.value}),
            min_ratio));
    }
    // II is unconditionally zero in a 2x2 target (low-dimensional accident),
    // so its symmetry hypothesis is exercised on a 3-D-target snapshot where
    // it is genuinely load-bearing.
    {
        ModelParams p3 = p;
        p3.d_target = 3;
        const Field Q3 = asym_perturb(
            random_qtensor(Q.grid(), 3, seed ^ 0xA0761D6478BD642FULL,
                           std::max(Q.norm_l2(), 1.0), 2.0, ctrl_band));
        const LyapunovSnapshot s3 = make_snapshot(Q3, u, p3);
        // split II into its two constituent integrals so the broken sum is
        // compared against their generic size, not the huge absolute mass
        const Integral IIa = integrate(s3, [&](std::size_t i, PointTerm& pt) {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    double x = 0.0;
                    for (int g = 0; g < 3; ++g)
                        x += s3.Q[a * 3 + g][i] * s3.Om[g * 3 + b][i];
                    pt.add(p3.lambda * x * s3.F[a * 3 + b][i]);
                }
        });
        const Integral IIb = integrate(s3, [&](std::size_t i, PointTerm& pt) {
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    double x = 0.0;
                    for (int g = 0; g < 3; ++g)
                        x += -s3.Om[a * 3 + g][i] * s3.Q[g * 3 + b][i];
                    pt.add(p3.lambda * x * s3.F[a * 3 + b][i]);
                }
        });
        const double scale = std::max(
            {std::abs(IIa.value), std::abs(IIb.value), 1e-300});
        rep.add(check_nonzero("II|asym-Q(3d-target)", IIa.value + IIb.value,
                              scale, min_ratio));
    }
    return rep;
}

namespace {

struct UniqTerms {
    double C1, C2, C3, C4, D1, D2, F1, F2;
    double scale_C, scale_D, scale_F;
};

UniqTerms uniqueness_terms(const Field& Q1, const Field& Q2, const Field& u1,
                           const Field& u2, const ModelParams& p) {
    const Field du = u1 - u2;
    const Field dQ = Q1 - Q2;
    const StrainRotation s1 = strain_rotation(u1);
    const StrainRotation s2 = strain_rotation(u2);
    const Field dD = s1.D - s2.D;
    const Field dOm = s1.Omega - s2.Omega;
    const Field lap_dQ = laplacian(dQ);
    const Field grad_du = gradient(du);

    auto hnorm = [](const Field& f) { return sobolev_norm_direct(f, -0.5); };

    UniqTerms t{};
    t.C1 = -p.L * p.xi * 0.5 * sobolev_pairing(dD, lap_dQ, -0.5);
    t.C2 = t.C1;
    t.C3 = p.L * p.xi * 0.5 * sobolev_pairing(lap_dQ, grad_du, -0.5);
    t.C4 = t.C3;
    t.D1 = -p.L * 0.5 * sobolev_pairing(dOm, lap_dQ, -0.5);
    t.D2 = -t.D1;

    // F terms: s = tr(dQ Q1 + Q2 dQ), pointwise products, common dealiasing
    PhysArray q1 = to_phys(Q1), q2 = to_phys(Q2), dq = to_phys(dQ);
    PhysArray s = pw::add(pw::trace(pw::matmul(dq, q1)),
                          pw::trace(pw::matmul(q2, dq)));
    Field f1 = to_spectral(pw::mul_scalar_field(s, pw::matmul(q2, q2)));
    Field f2 = to_spectral(pw::matmul(pw::mul_scalar_field(s, q2), q2));
    t.F1 = p.c * sobolev_pairing(f1, grad_du, -0.5);
    t.F2 = -p.c * sobolev_pairing(f2, grad_du, -0.5);

    t.scale_C = std::max({std::abs(t.C1), std::abs(t.C2), std::abs(t.C3),
                          std::abs(t.C4), 1e-300});
    t.scale_D =
        std::max(p.L * 0.5 * hnorm(dOm) * hnorm(lap_dQ), 1e-300);
    // F1, F2 vanish individually in the 2-D target (Q2^2 is a multiple of Id
    // by Cayley-Hamilton and the Id-pairing dies against div-free delta-u),
    // so the Cauchy-Schwarz bound is the meaningful magnitude reference.
    t.scale_F = std::max(
        p.c * std::max(hnorm(f1), hnorm(f2)) * hnorm(grad_du), 1e-300);
    return t;
}

}  // namespace

AuditReport audit_uniqueness(const Field& Q1, const Field& Q2, const Field& u1,
                             const Field& u2, const ModelParams& p, double tol,
                             double power) {
    if (Q1.shape()[0] != 2 || Q1.grid()->dim() != 2)
        throw std::invalid_argument("audit_uniqueness: requires d = d_target = 2");
    const UniqTerms t = uniqueness_terms(Q1, Q2, u1, u2, p);
    AuditReport rep;
    auto zero = [&](const std::string& n, double v, double s) {
        rep.add(check_zero(n, v, s, tol));
    };
    zero("C1+C2+C3+C4", t.C1 + t.C2 + t.C3 + t.C4, t.scale_C);
    zero("D1+D2", t.D1 + t.D2, t.scale_D);
    zero("F1+F2", t.F1 + t.F2, t.scale_F);
    // The individual D and F terms vanish identically in this setting (D by
    // symmetric-antisymmetric orthogonality, F by Cayley-Hamilton plus
    // incompressibility), which makes them zero-identities of their own; test
    // power for those families comes from the negative controls.
    zero("D1", t.D1, t.scale_D);
    zero("D2", t.D2, t.scale_D);
    zero("F1", t.F1, t.scale_F);
    zero("F2", t.F2, t.scale_F);
    // the C constituents are generically nonzero
    rep.add(check_nonzero("C1|power", t.C1, t.scale_C, power));
    rep.add(check_nonzero("C3|power", t.C3, t.scale_C, power));
    return rep;
}

AuditReport audit_uniqueness_controls(const Field& Q1, const Field& Q2,
                                      const Field& u1, const Field& u2,
                                      const ModelParams& p, double min_ratio) {
    const Field du = u1 - u2;
    const Field dQ = Q1 - Q2;
    const StrainRotation s1 = strain_rotation(u1);
    const StrainRotation s2 = strain_rotation(u2);
    const Field dD = s1.D - s2.D;
    const Field lap_dQ = laplacian(dQ);
    const Field grad_du = gradient(du);
    auto hnorm = [](const Field& f) { return sobolev_norm_direct(f, -0.5); };

    AuditReport rep;

    // D relies on Omega antisymmetric: substitute delta-D for delta-Omega and
    // drop the transpose sign flip; the pair then sums to -L <dD, lap dQ>.
    {
        const double d_ctrl = -p.L * sobolev_pairing(dD, lap_dQ, -0.5);
        const double scale = std::max(p.L * hnorm(dD) * hnorm(lap_dQ), 1e-300);
        rep.add(check_nonzero("D-sum|dOmega->dD", d_ctrl, scale, min_ratio));
    }

    // C relies on delta-Q symmetric: an antisymmetric defect in Q1 leaves
    // <lap dQ, delta-Omega> alive in C3 + C4.
    {
        PhysArray q1 = to_phys(Q1);
        const int dt = Q1.shape()[0];
        const double amp =
            1.0 * std::max(Q1.norm_l2(), 1.0) / std::sqrt(Q1.grid()->volume());
        PhysArray r = to_phys(random_qtensor(Q1.grid(), dt, 0xD15EA5Eull,
                                             std::max(Q1.norm_l2(), 1.0)));
        for (int i = 0; i < dt; ++i)
            for (int j = 0; j < dt; ++j) {
                if (i >= j) continue;
                auto& dst = q1.comp[i * dt + j];
                const auto& src = r.comp[j * dt + i];
                for (std::size_t m = 0; m < dst.size(); ++m)
                    dst[m] += amp * src[m];
            }
        const Field Q1a = to_spectral(q1, false);
        const Field dQa = Q1a - Q2;
        const Field lap_dQa = laplacian(dQa);
        const double csum = -p.L * p.xi * sobolev_pairing(dD, lap_dQa, -0.5) +
                            p.L * p.xi * sobolev_pairing(lap_dQa, grad_du, -0.5);
        // compare against the magnitude of one constituent pairing
        const double scale = std::max(
            std::abs(p.L * p.xi * sobolev_pairing(dD, lap_dQa, -0.5)), 1e-300);
        rep.add(check_nonzero("C-sum|asym-Q", csum, scale, min_ratio));
    }

    // F relies on the same Q2 appearing on both sides of the scalar factor
    {
        PhysArray q1 = to_phys(Q1), q2 = to_phys(Q2), dq = to_phys(dQ);
        PhysArray s = pw::add(pw::trace(pw::matmul(dq, q1)),
                              pw::trace(pw::matmul(q2, dq)));
        Field f1 = to_spectral(pw::mul_scalar_field(s, pw::matmul(q2, q2)));
        Field f2bad = to_spectral(pw::matmul(pw::mul_scalar_field(s, q1), q2));
        const double bad_pairing = p.c * sobolev_pairing(f2bad, grad_du, -0.5);
        const double fsum = p.c * sobolev_pairing(f1, grad_du, -0.5) -
                            bad_pairing;
        const double scale = std::max(std::abs(bad_pairing), 1e-300);
        rep.add(check_nonzero("F-sum|Q2->Q1", fsum, scale, min_ratio));
    }
    return rep;
}

ScalingReport audit_scaling(const SimState& base_initial, const ModelParams& p,
                            const StepperConfig& cfg, int delta) {
    if (delta < 1 || (delta & (delta - 1)) != 0)
        throw std::invalid_argument("audit_scaling: delta must be a power of two");

    const auto grid = base_initial.Q.grid();

    // mode map f(x) -> f(delta x): coefficient at k moves to delta k. Strict
    // mode rejects any dropped mass (initial data must map losslessly);
    // evolved comparison states may spill past the band, which is part of the
    // truncation error the report measures.
    auto rescale = [&](const Field& f, double amp, bool strict) {
        Field out(f.grid(), f.shape());
        const auto& g = *f.grid();
        const int n = g.n_axis();
        int m[3];
        double dropped = 0.0;
        for (std::size_t i = 0; i < f.num_modes(); ++i) {
            g.mode_ints(i, m);
            bool in_band = true;
            std::size_t target = 0;
            for (int a = 0; a < g.dim(); ++a) {
                const int md = m[a] * delta;
                if (std::abs(md) > g.dealias_limit()) in_band = false;
                target = target * n + ((md % n) + n) % n;
            }
            for (int c = 0; c < f.ncomp(); ++c) {
                const auto v = f.comp(c)[i];
                if (std::norm(v) == 0.0) continue;
                if (!in_band || !g.dealias_keep(i)) {
                    dropped += std::norm(v);
                    continue;
                }
                out.comp(c)[target] += amp * v;
            }
        }
        if (strict && dropped > 1e-24)
            throw std::invalid_argument(
                "audit_scaling: initial data not band-limited enough for delta");
        return out;
    };

    ModelParams ps = p;
    const double d2 = static_cast<double>(delta) * delta;
    ps.a *= d2;
    ps.b *= d2;
    ps.c *= d2;

    SimState scaled_init;
    scaled_init.t = 0.0;
    scaled_init.Q = rescale(base_initial.Q, 1.0, true);
    scaled_init.u = rescale(base_initial.u, static_cast<double>(delta), true);

    StepperConfig base_cfg = cfg;
    base_cfg.dt = cfg.dt * d2;
    base_cfg.t_final = cfg.t_final * d2;

    std::vector<SimState> base_states, scaled_states;
    run(base_initial, p, base_cfg, {},
        [&](const SimState& s) { base_states.push_back(s); });
    run(scaled_init, ps, cfg, {},
        [&](const SimState& s) { scaled_states.push_back(s); });

    ScalingReport rep;
    const std::size_t n = std::min(base_states.size(), scaled_states.size());
    for (std::size_t i = 0; i < n; ++i) {
        const Field Qref = rescale(base_states[i].Q, 1.0, false);
        const Field uref =
            rescale(base_states[i].u, static_cast<double>(delta), false);
        const double denom = Qref.norm_l2() + uref.norm_l2();
        const double err = (scaled_states[i].Q - Qref).norm_l2() +
                           (scaled_states[i].u - uref).norm_l2();
        rep.times.push_back(scaled_states[i].t);
        const double rel = denom > 0.0 ? err / denom : err;
        rep.discrepancy.push_back(rel);
        rep.max_discrepancy = std::max(rep.max_discrepancy, rel);
    }
    return rep;
}

EnergyBalanceReport audit_energy_balance(const RunSummary& summary,
                                         double residual_budget) {
    EnergyBalanceReport rep;
    const auto& rows = summary.rows;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        rep.max_residual = std::max(rep.max_residual, std::abs(rows[i].residual));
        const double h = rows[i + 1].t - rows[i].t;
        const double dE = (rows[i + 1].energy - rows[i].energy) / h;
        rep.monotone_slack = std::max(rep.monotone_slack, dE);
        if (dE > residual_budget) rep.energy_monotone = false;
    }
    // shifted-energy monitor: any increase must be coverable by the measured
    // control terms; report the fitted constant (no book constant asserted)
    double cfit = 0.0;
    bool bounded = true;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double ds = rows[i + 1].shifted_energy - rows[i].shifted_energy;
        if (ds <= 0.0) continue;
        const double h = rows[i + 1].t - rows[i].t;
        auto controls = [](const DiagnosticsRow& r) {
            return r.grad_Q * r.grad_Q + r.l2_Q * r.l2_Q +
                   std::pow(r.l4_Q, 4.0) + std::pow(r.l6_Q, 6.0) +
                   r.visc;
        };
        const double ctrl = 0.5 * h * (controls(rows[i]) + controls(rows[i + 1]));
        if (ctrl <= 0.0) {
            bounded = false;
            continue;
        }
        cfit = std::max(cfit, ds / ctrl);
    }
    rep.shifted_bound_constant = cfit;
    rep.shifted_bounded = bounded && std::isfinite(cfit);
    return rep;
}

OsgoodReport uniqueness_monitor(const TwinSummary& twin, int substeps) {
    OsgoodReport rep;
    const auto& rows = twin.rows;
    if (rows.empty()) return rep;
    rep.envelope.push_back(rows[0].phi);
    double env = rows[0].phi;
    double chi_int = 0.0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        const double dt = rows[i + 1].t - rows[i].t;
        const double chi = rows[i].chi_emp;
        chi_int += chi * dt;
        if (env > 0.0) {
            const double h = dt / substeps;
            for (int s = 0; s < substeps; ++s) env += h * chi * osgood_mu(env);
        }
        rep.envelope.push_back(env);
        if (rows[i + 1].phi > env * (1.0 + 1e-9) + 1e-300) rep.envelope_ok = false;
    }
    rep.chi_integral = chi_int;
    rep.chi_finite = std::isfinite(chi_int);
    return rep;
}

}  // namespace qtf
