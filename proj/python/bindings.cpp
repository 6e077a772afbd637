#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <variant>

#include "hboltz/basis.hpp"
#include "hboltz/collision_models.hpp"
#include "hboltz/collision_tensor.hpp"
#include "hboltz/errors.hpp"
#include "hboltz/ipl_kernel.hpp"
#include "hboltz/solver.hpp"

namespace py = pybind11;
using namespace hboltz;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Index3 = std::tuple<int, int, int>;

MultiIndex to_index(const Index3& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t)}; }
Index3 from_index(const MultiIndex& k) { return {k.k1, k.k2, k.k3}; }

int degree_for_size(std::size_t n)
{
  int M = 0;
  while (basis_size(M) < n) ++M;
  if (basis_size(M) != n) throw ContractError("coefficient vector length " + std::to_string(n) + " is not a basis size");
  return M;
}

std::span<const double> view(const Array& a)
{
  if (a.ndim() != 1) throw ContractError("expected a one-dimensional array");
  return {a.data(), static_cast<std::size_t>(a.shape(0))};
}

Array to_array(const std::vector<double>& v)
{
  Array out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

SpectralState to_state(const Array& a)
{
  const auto f = view(a);
  SpectralState s(degree_for_size(f.size()));
  std::copy(f.begin(), f.end(), s.coeffs.begin());
  return s;
}

py::dict moments_dict(const Moments& m)
{
  py::dict d;
  d["rho"] = m.rho;
  d["u"] = m.u;
  d["theta"] = m.theta;
  d["sigma"] = m.sigma;
  if (m.has_heat_flux) d["q"] = m.q;
  else d["q"] = py::none();
  return d;
}

using Model = std::variant<std::shared_ptr<const CollisionTensor>, std::shared_ptr<const HybridModel>, double>;

RhsFunction rhs_for(const Model& model)
{
  if (auto* t = std::get_if<std::shared_ptr<const CollisionTensor>>(&model)) {
    auto tensor = *t;
    return [tensor](std::span<const double> f, std::span<double> out) { quadratic_rhs(*tensor, f, out); };
  }
  if (auto* h = std::get_if<std::shared_ptr<const HybridModel>>(&model)) {
    auto hybrid = *h;
    return [hybrid](std::span<const double> f, std::span<double> out) { hybrid_rhs(*hybrid, f, out); };
  }
  const double tau = std::get<double>(model);
  return [tau](std::span<const double> f, std::span<double> out) { bgk_rhs(tau, f, out); };
}

// Returns (times, states) with one row per recorded step.
py::tuple integrate(const Model& model, const Array& f0, double dt, double t_end, int record_every)
{
  if (record_every < 1) throw ContractError("record_every must be >= 1");
  SpectralState state = to_state(f0);
  const int steps = rk4_step_count(dt, t_end);
  std::vector<double> times;
  std::vector<double> rows;
  auto observer = [&](int step, double t, const SpectralState& s) {
    if (step % record_every != 0 && step != steps) return;
    times.push_back(t);
    rows.insert(rows.end(), s.coeffs.begin(), s.coeffs.end());
  };
  const RhsFunction rhs = rhs_for(model);
  {
    py::gil_scoped_release release;
    rk4_integrate(rhs, state, dt, t_end, observer);
  }
  const auto n = static_cast<py::ssize_t>(state.coeffs.size());
  Array out({static_cast<py::ssize_t>(times.size()), n});
  std::copy(rows.begin(), rows.end(), out.mutable_data());
  return py::make_tuple(to_array(times), out);
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
  m.doc() = "Hermite spectral solver for the homogeneous Boltzmann equation";

  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);
  py::register_exception<MemoryCapError>(m, "MemoryCapError", PyExc_MemoryError);
  py::register_exception<CacheFormatError>(m, "CacheFormatError", PyExc_OSError);
  py::register_exception<StaleCacheError>(m, "StaleCacheError", PyExc_OSError);

  // basis
  m.def("basis_size", [](int M) { return basis_size(M); }, py::arg("M"));
  m.def("rank", [](const Index3& k) { return rank(to_index(k)); }, py::arg("k"));
  m.def("unrank", [](std::size_t r, int M) { return from_index(unrank(r, M)); }, py::arg("r"), py::arg("M"));
  m.def(
      "index_set",
      [](int M) {
        std::vector<Index3> out;
        for (const auto& k : index_set(M)) out.push_back(from_index(k));
        return out;
      },
      py::arg("M"));
  m.def("hermite", py::vectorize(&hermite), py::arg("n"), py::arg("x"));

  // kernel
  py::class_<KernelModel>(m, "KernelModel")
      .def(py::init([](double eta, double abs_tol, double rel_tol, int max_subdivisions) {
             return KernelModel(eta, QuadratureSpec{abs_tol, rel_tol, max_subdivisions});
           }),
           py::arg("eta"), py::arg("abs_tol") = 1e-12, py::arg("rel_tol") = 1e-10, py::arg("max_subdivisions") = 200)
      .def_property_readonly("eta", &KernelModel::eta)
      .def_property_readonly("is_maxwell", &KernelModel::is_maxwell)
      .def("chi", &KernelModel::chi, py::arg("y"))
      .def("i_integral", &KernelModel::i_integral, py::arg("k"))
      .def("b_tilde", &KernelModel::b_tilde, py::arg("k"))
      .def("__repr__", [](const KernelModel& k) { return "KernelModel(eta=" + format_real(k.eta()) + ")"; });
  m.def("a2_integral", &a2_integral, py::arg("model"));
  m.def("bgk_tau", &bgk_tau, py::arg("model"));
  m.def("scaled_time_constant", py::overload_cast<const KernelModel&>(&scaled_time_constant), py::arg("model"));

  // tensor
  py::class_<CollisionTensor, std::shared_ptr<CollisionTensor>>(m, "CollisionTensor")
      .def_property_readonly("eta", &CollisionTensor::eta)
      .def_property_readonly("M0", &CollisionTensor::M0)
      .def_property_readonly("drop_floor", &CollisionTensor::drop_floor)
      .def("__len__", &CollisionTensor::size)
      .def("value", &CollisionTensor::value, py::arg("k"), py::arg("i"), py::arg("j"))
      .def("entries",
           [](const CollisionTensor& t) {
             const auto e = t.entries();
             const auto n = static_cast<py::ssize_t>(e.size());
             py::array_t<std::uint32_t> k(n), i(n), j(n);
             Array v(n);
             for (py::ssize_t r = 0; r < n; ++r) {
               k.mutable_at(r) = e[r].k;
               i.mutable_at(r) = e[r].i;
               j.mutable_at(r) = e[r].j;
               v.mutable_at(r) = e[r].value;
             }
             return py::make_tuple(k, i, j, v);
           })
      .def(py::self == py::self);

  m.def("memory_estimate", &memory_estimate, py::arg("M0"));
  m.def(
      "assemble",
      [](int M0, const KernelModel& model, double drop_floor, std::uint64_t memory_cap_bytes, int threads) {
        py::gil_scoped_release release;
        return std::make_shared<CollisionTensor>(assemble(M0, model, {drop_floor, memory_cap_bytes, threads}));
      },
      py::arg("M0"), py::arg("model"), py::arg("drop_floor") = 1e-14,
      py::arg("memory_cap_bytes") = std::uint64_t{16} << 30, py::arg("threads") = 0);
  m.def("save", &save, py::arg("tensor"), py::arg("path"));
  m.def(
      "load",
      [](const std::filesystem::path& p, std::optional<double> eta, std::optional<int> M0) {
        if (eta.has_value() != M0.has_value()) throw ContractError("pass both eta and M0 or neither");
        return std::make_shared<CollisionTensor>(eta ? load(p, *eta, *M0) : load(p));
      },
      py::arg("path"), py::arg("eta") = py::none(), py::arg("M0") = py::none());
  m.def("cache_path", &cache_path, py::arg("dir"), py::arg("eta"), py::arg("M0"));

  // models
  py::class_<HybridModel, std::shared_ptr<HybridModel>>(m, "HybridModel")
      .def(py::init([](std::shared_ptr<CollisionTensor> t, int M, std::optional<double> nu) {
             return nu ? std::make_shared<HybridModel>(t, M, *nu) : std::make_shared<HybridModel>(t, M);
           }),
           py::arg("tensor"), py::arg("M"), py::arg("nu") = py::none())
      .def_property_readonly("M", &HybridModel::M)
      .def_property_readonly("M0", &HybridModel::M0)
      .def_property_readonly("nu", &HybridModel::nu);

  m.def(
      "quadratic_rhs", [](const CollisionTensor& t, const Array& f) { return to_array(quadratic_rhs(t, view(f))); },
      py::arg("tensor"), py::arg("f"));
  m.def(
      "hybrid_rhs", [](const HybridModel& h, const Array& f) { return to_array(hybrid_rhs(h, view(f))); },
      py::arg("model"), py::arg("f"));
  m.def(
      "bgk_rhs", [](double tau, const Array& f) { return to_array(bgk_rhs(tau, view(f))); }, py::arg("tau"),
      py::arg("f"));
  m.def("linearized_operator", &linearized_operator, py::arg("tensor"));
  m.def(
      "spectral_radius", [](const Eigen::MatrixXd& L) { return spectral_radius(L); }, py::arg("L"));

  // solver
  m.def(
      "integrate",
      [](std::variant<std::shared_ptr<CollisionTensor>, std::shared_ptr<HybridModel>, double> model, const Array& f0,
         double dt, double t_end, int record_every) {
        return integrate(std::visit([](auto&& x) -> Model { return x; }, model), f0, dt, t_end, record_every);
      },
      py::arg("model"), py::arg("f0"), py::arg("dt"), py::arg("t_end"), py::arg("record_every") = 1,
      "RK4 with a quadratic tensor, a HybridModel or a BGK relaxation time. Returns (times, states).");
  m.def(
      "moments", [](const Array& f) { return moments_dict(moments(to_state(f))); }, py::arg("f"));
  m.def(
      "bkw_coeffs",
      [](double t, int M) {
        static const BkwReference ref = BkwReference::from_kernel(KernelModel(5.0));
        return to_array(bkw_coeffs(t, ref, M).coeffs);
      },
      py::arg("t"), py::arg("M"));
  m.def(
      "project_bigaussian", [](int M) { return to_array(project_bigaussian(M).coeffs); }, py::arg("M"));
  m.def(
      "project_discontinuous", [](int M) { return to_array(project_discontinuous(M).coeffs); }, py::arg("M"));
  m.def(
      "marginal_1d",
      [](const Array& f, const Array& v1) { return to_array(marginal_1d(to_state(f), view(v1))); }, py::arg("f"),
      py::arg("v1"));
  m.def(
      "marginal_2d",
      [](const Array& f, const Array& v1, const Array& v2) {
        const auto flat = marginal_2d(to_state(f), view(v1), view(v2));
        Array out({v1.shape(0), v2.shape(0)});
        std::copy(flat.begin(), flat.end(), out.mutable_data());
        return out;
      },
      py::arg("f"), py::arg("v1"), py::arg("v2"));
}
