#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qtf/audit.hpp"
#include "qtf/config.hpp"
#include "qtf/initial_conditions.hpp"
#include "qtf/littlewood_paley.hpp"
#include "qtf/lp_checks.hpp"
#include "qtf/model.hpp"
#include "qtf/operators.hpp"
#include "qtf/osgood.hpp"
#include "qtf/snapshot.hpp"
#include "qtf/solver.hpp"

namespace py = pybind11;
using namespace qtf;

namespace {

py::array_t<double> field_to_numpy(const Field& f) {
    const auto phys = f.to_physical();
    std::vector<py::ssize_t> dims;
    dims.push_back(f.ncomp());
    for (int a = 0; a < f.grid()->dim(); ++a) dims.push_back(f.grid()->n_axis());
    py::array_t<double> out(dims);
    double* dst = out.mutable_data();
    const std::size_t n = f.num_modes();
    for (int c = 0; c < f.ncomp(); ++c)
        std::copy(phys[c].begin(), phys[c].end(), dst + c * n);
    return out;
}

Field field_from_numpy(GridPtr grid, std::vector<int> shape,
                       const py::array_t<double, py::array::c_style |
                                                     py::array::forcecast>& arr) {
    int ncomp = 1;
    for (int s : shape) ncomp *= s;
    const std::size_t n = grid->num_points();
    if (static_cast<std::size_t>(arr.size()) != ncomp * n)
        throw std::invalid_argument("from_numpy: array size mismatch");
    std::vector<std::vector<double>> vals(ncomp, std::vector<double>(n));
    const double* src = arr.data();
    for (int c = 0; c < ncomp; ++c)
        std::copy(src + c * n, src + (c + 1) * n, vals[c].begin());
    return Field::from_physical(std::move(grid), std::move(shape), vals);
}

py::dict row_to_dict(const DiagnosticsRow& r) {
    py::dict d;
    d["t"] = r.t;
    d["E"] = r.energy;
    d["kinetic"] = r.kinetic;
    d["free_energy"] = r.free_energy;
    d["visc"] = r.visc;
    d["rot"] = r.rot;
    d["residual"] = r.residual;
    d["H1_Q"] = r.h1_Q;
    d["L2_u"] = r.l2_u;
    d["max_u"] = r.max_u;
    d["E_plus_M_Q2"] = r.shifted_energy;
    d["cfl_flag"] = r.cfl_flag;
    return d;
}

py::dict twin_row_to_dict(const TwinRow& r) {
    py::dict d;
    d["t"] = r.t;
    d["Phi"] = r.phi;
    d["dPhi_dt"] = r.dphi_dt;
    d["mu_Phi"] = r.mu_phi;
    d["chi_emp"] = r.chi_emp;
    d["diss_u"] = r.diss_u;
    d["diss_Q"] = r.diss_Q;
    d["N_t"] = r.n_t;
    return d;
}

py::list report_to_list(const AuditReport& rep) {
    py::list out;
    for (const auto& e : rep.entries) {
        py::dict d;
        d["identity"] = e.identity;
        d["value"] = e.value;
        d["scale"] = e.scale;
        d["ratio"] = e.ratio;
        d["pass"] = e.pass;
        out.append(d);
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "pseudo-spectral Q-tensor / Navier-Stokes toolkit";

    // holder is shared_ptr<Grid>; the C++ API's shared_ptr<const Grid>
    // converts implicitly at call boundaries
    py::class_<Grid, std::shared_ptr<Grid>>(m, "Grid")
        .def(py::init([](int dim, int n_axis, double box_scale,
                         double dealias_fraction) {
                 return std::make_shared<Grid>(dim, n_axis, box_scale,
                                               dealias_fraction);
             }),
             py::arg("dim"), py::arg("n_axis"), py::arg("box_scale") = 1.0,
             py::arg("dealias_fraction") = 2.0 / 3.0)
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("n_axis", &Grid::n_axis)
        .def_property_readonly("box_scale", &Grid::box_scale)
        .def_property_readonly("num_points", &Grid::num_points)
        .def_property_readonly("volume", &Grid::volume)
        .def_property_readonly("dealias_limit", &Grid::dealias_limit);

    py::class_<Field>(m, "Field")
        .def_static("from_numpy", &field_from_numpy, py::arg("grid"),
                    py::arg("shape"), py::arg("values"),
                    "build a spectral field from physical-space samples")
        .def("to_numpy", &field_to_numpy)
        .def_property_readonly("shape",
                               [](const Field& f) { return f.shape(); })
        .def_property_readonly("grid",
                               [](const Field& f) {
                                   return std::const_pointer_cast<Grid>(f.grid());
                               })
        .def("norm_l2", &Field::norm_l2)
        .def("max_abs", &Field::max_abs_physical)
        .def("hermitian_defect", &Field::hermitian_defect)
        .def("__add__", [](const Field& a, const Field& b) { return a + b; })
        .def("__sub__", [](const Field& a, const Field& b) { return a - b; })
        .def("__rmul__", [](const Field& f, double s) { return s * f; });

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("a", &ModelParams::a)
        .def_readwrite("b", &ModelParams::b)
        .def_readwrite("c", &ModelParams::c)
        .def_readwrite("L", &ModelParams::L)
        .def_readwrite("Gamma", &ModelParams::Gamma)
        .def_readwrite("nu", &ModelParams::nu)
        .def_readwrite("lam", &ModelParams::lambda)
        .def_readwrite("xi", &ModelParams::xi)
        .def_readwrite("d_target", &ModelParams::d_target)
        .def_readwrite("xi0_threshold", &ModelParams::xi0_threshold)
        .def("validate", &ModelParams::validate);

    py::class_<Regularization>(m, "Regularization")
        .def(py::init<>())
        .def_readwrite("enabled", &Regularization::enabled)
        .def_readwrite("n", &Regularization::n)
        .def_readwrite("eps", &Regularization::eps);

    py::enum_<Scheme>(m, "Scheme")
        .value("imex1", Scheme::imex1)
        .value("imex2", Scheme::imex2);

    py::class_<StepperConfig>(m, "StepperConfig")
        .def(py::init<>())
        .def_readwrite("dt", &StepperConfig::dt)
        .def_readwrite("scheme", &StepperConfig::scheme)
        .def_readwrite("reg", &StepperConfig::reg)
        .def_readwrite("t_final", &StepperConfig::t_final)
        .def_readwrite("cadence", &StepperConfig::cadence);

    py::class_<SimState>(m, "SimState")
        .def(py::init<>())
        .def_readwrite("t", &SimState::t)
        .def_readwrite("Q", &SimState::Q)
        .def_readwrite("u", &SimState::u);

    // spectral operators
    m.def("gradient", &gradient);
    m.def("divergence", &divergence);
    m.def("laplacian", &laplacian);
    m.def("leray_project", &leray_project);
    m.def("spectral_cutoff", &spectral_cutoff, py::arg("f"), py::arg("n"));
    m.def("mollify", &mollify, py::arg("f"), py::arg("eps"));
    m.def("mollifier_multiplier", &mollifier_multiplier);

    // constitutive terms and energies
    m.def("bulk_force", &bulk_force);
    m.def("molecular_field", &molecular_field);
    m.def("alignment", [](const Field& u, const Field& Q, const ModelParams& p) {
        return alignment(strain_rotation(u), Q, p);
    });
    m.def("stress_tau", [](const Field& Q, const Field& H, const ModelParams& p) {
        return stress_tau(Q, H, gradient(Q), p);
    });
    m.def("stress_sigma", &stress_sigma);
    m.def("free_energy", &free_energy);
    m.def("kinetic_energy", &kinetic_energy);
    m.def("total_energy", &total_energy);
    m.def("dissipation_rate",
          [](const Field& Q, const Field& u, const ModelParams& p) {
              const DissipationRate d = dissipation_rate(Q, u, p);
              return py::make_tuple(d.viscous, d.rotational);
          });
    m.def("choose_shift_M", &choose_shift_M);
    m.def("symmetrize_tracefree", &symmetrize_tracefree);
    m.def("trace_defect", &trace_defect);
    m.def("symmetry_defect", &symmetry_defect);
    m.def("divergence_defect", &divergence_defect);

    // initial conditions
    m.def("random_scalar", &random_scalar, py::arg("grid"), py::arg("seed"),
          py::arg("l2_norm"), py::arg("slope") = 2.0, py::arg("kmax") = 0);
    m.def("random_velocity", &random_velocity, py::arg("grid"), py::arg("seed"),
          py::arg("l2_norm"), py::arg("slope") = 2.0, py::arg("kmax") = 0);
    m.def("random_qtensor", &random_qtensor, py::arg("grid"),
          py::arg("d_target"), py::arg("seed"), py::arg("l2_norm"),
          py::arg("slope") = 2.0, py::arg("kmax") = 0);
    m.def("taylor_green_velocity", &taylor_green_velocity);
    m.def("uniaxial_stripe_q", &uniaxial_stripe_q);

    // Littlewood-Paley toolkit
    py::class_<DyadicDecomposition>(m, "DyadicDecomposition")
        .def(py::init<GridPtr>())
        .def_property_readonly("q_min", &DyadicDecomposition::q_min)
        .def_property_readonly("q_max", &DyadicDecomposition::q_max)
        .def("block", &DyadicDecomposition::block)
        .def("lowpass", &DyadicDecomposition::lowpass)
        .def("partition_defect", &DyadicDecomposition::partition_defect)
        .def("homogeneous_defect", &DyadicDecomposition::homogeneous_defect);
    m.def("sobolev_norm", &sobolev_norm_direct, py::arg("f"), py::arg("s"));
    m.def("sobolev_norm_dyadic", &sobolev_norm_dyadic);
    m.def("sobolev_pairing", &sobolev_pairing);
    m.def("lp_norm", &lp_norm);
    m.def("commutator", &commutator);
    m.def("bony_decompose",
          [](const Field& a, const Field& b, const DyadicDecomposition& dd) {
              auto parts = bony_decompose(a, b, dd);
              return py::make_tuple(parts.low_high, parts.high_low,
                                    parts.resonant);
          });
    m.def("jq_decompose", [](const Field& A, const Field& B, int q,
                             const DyadicDecomposition& dd) {
        auto parts = jq_decompose(A, B, q, dd);
        return py::make_tuple(parts.j1, parts.j2, parts.j3, parts.j4);
    });

    // Osgood machinery
    m.def("osgood_mu", &osgood_mu);
    m.def(
        "osgood_integrate",
        [](double phi0, const std::vector<double>& chi, double dt,
           int substeps) { return osgood_integrate(phi0, chi, dt, substeps); },
        py::arg("phi0"), py::arg("chi"), py::arg("dt"),
        py::arg("substeps") = 100);

    // solver
    m.def("rhs_Q", &rhs_Q);
    m.def("rhs_u", &rhs_u);
    m.def("epsilon_stabilizers", &epsilon_stabilizers);
    m.def("pressure_field", &pressure_field);
    m.def("step", &step);
    m.def("run",
          [](const SimState& s, const ModelParams& p, const StepperConfig& cfg) {
              RunSummary sum = run(s, p, cfg);
              py::list rows;
              for (const auto& r : sum.rows) rows.append(row_to_dict(r));
              py::dict d;
              d["rows"] = rows;
              d["steps"] = sum.steps;
              d["shift_M"] = sum.shift_M;
              return d;
          });
    m.def("twin_run", [](const SimState& a, const SimState& b,
                         const ModelParams& p, const StepperConfig& cfg) {
        TwinSummary sum = twin_run(a, b, p, cfg);
        const OsgoodReport mon = uniqueness_monitor(sum);
        py::list rows;
        for (std::size_t i = 0; i < sum.rows.size(); ++i) {
            py::dict d = twin_row_to_dict(sum.rows[i]);
            d["envelope"] = mon.envelope[i];
            rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["chi_integral"] = mon.chi_integral;
        out["envelope_ok"] = mon.envelope_ok;
        return out;
    });

    // audits
    m.def(
        "audit_lyapunov",
        [](const Field& Q, const Field& u, const ModelParams& p, double tol) {
            return report_to_list(audit_lyapunov(Q, u, p, tol));
        },
        py::arg("Q"), py::arg("u"), py::arg("p"), py::arg("tol") = 1e-10);
    m.def("audit_uniqueness", [](const Field& Q1, const Field& Q2,
                                 const Field& u1, const Field& u2,
                                 const ModelParams& p) {
        return report_to_list(audit_uniqueness(Q1, Q2, u1, u2, p));
    });

    // snapshots
    m.def("write_snapshot", &write_snapshot);
    m.def("read_snapshot", [](const std::string& path) {
        SnapshotData s = read_snapshot(path);
        return py::make_tuple(s.name, s.time, s.field);
    });
}
