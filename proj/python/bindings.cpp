#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hardyloc/atoms.hpp"
#include "hardyloc/boundedness.hpp"
#include "hardyloc/corpus.hpp"
#include "hardyloc/muckenhoupt.hpp"
#include "hardyloc/operators.hpp"

namespace py = pybind11;
using namespace hardyloc;

namespace {

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

// 1D arrays have shape (m,), 2D arrays (m, m); values are cell samples.
Grid grid_of(const py::buffer_info& b, double L) {
  if (b.ndim == 1) return make_grid(1, L, int(b.shape[0]));
  if (b.ndim == 2 && b.shape[0] == b.shape[1]) return make_grid(2, L, int(b.shape[0]));
  throw Error("expected a 1D array or a square 2D array");
}

SampledFunction from_real(const RealArray& a, double L) {
  auto b = a.request();
  Grid g = grid_of(b, L);
  const double* p = static_cast<const double*>(b.ptr);
  SampledFunction f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = p[i];
  f.validate();
  return f;
}

SampledFunction from_complex(const ComplexArray& a, double L) {
  auto b = a.request();
  Grid g = grid_of(b, L);
  const cplx* p = static_cast<const cplx*>(b.ptr);
  SampledFunction f(g, false);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = p[i];
  f.validate();
  return f;
}

std::vector<py::ssize_t> shape_of(const Grid& g) {
  if (g.n == 1) return {g.m};
  return {g.m, g.m};
}

RealArray to_real(const SampledFunction& f) {
  RealArray out(shape_of(f.grid));
  double* p = out.mutable_data();
  for (std::size_t i = 0; i < f.size(); ++i) p[i] = f.values[i].real();
  return out;
}

ComplexArray to_complex(const SampledFunction& f) {
  ComplexArray out(shape_of(f.grid));
  cplx* p = out.mutable_data();
  for (std::size_t i = 0; i < f.size(); ++i) p[i] = f.values[i];
  return out;
}

HardyParams hardy(double p, double q, int s, int n) {
  auto hp = HardyParams::make(p, q, 1.0, n);
  if (s >= 0) {
    hp.s = s;
    hp.N = std::max(hp.N, s + 1);
  }
  hp.validate();
  return hp;
}

MaximalMode mode_of(const std::string& m) {
  if (m == "centered") return MaximalMode::centered;
  if (m == "nontangential") return MaximalMode::nontangential;
  throw Error("mode must be 'centered' or 'nontangential'");
}

}  // namespace

PYBIND11_MODULE(_hardyloc, mod) {
  mod.doc() = "Weighted local Hardy space numerics";
  // translators run newest first, so the derived type goes last
  py::register_exception<Error>(mod, "HardylocError", PyExc_RuntimeError);
  py::register_exception<UsageError>(mod, "UsageError", PyExc_ValueError);

  mod.def(
      "coords",
      [](int m, double L) {
        Grid g = make_grid(1, L, m);
        RealArray out(std::vector<py::ssize_t>{m});
        for (int j = 0; j < m; ++j) out.mutable_data()[j] = g.coord(j);
        return out;
      },
      py::arg("m"), py::arg("L"), "Cell centres of the m-cell grid on [-L, L].");

  mod.def(
      "corpus_function",
      [](const std::string& name, int m, double L, int n, std::uint64_t seed) {
        return to_real(corpus_function(make_grid(n, L, m), name, seed));
      },
      py::arg("name"), py::arg("m"), py::arg("L") = 8.0, py::arg("n") = 1, py::arg("seed") = 0);

  mod.def(
      "weight",
      [](const std::string& desc, int m, double L, int n) {
        return to_real(parse_weight(desc, make_grid(n, L, m)).as_function());
      },
      py::arg("desc"), py::arg("m"), py::arg("L") = 8.0, py::arg("n") = 1);

  mod.def(
      "ap_loc_constant",
      [](const std::string& desc, double p, int m, double L, int n, double side_cap) {
        return ap_loc_constant(parse_weight(desc, make_grid(n, L, m)), p, side_cap).constant;
      },
      py::arg("desc"), py::arg("p"), py::arg("m"), py::arg("L") = 8.0, py::arg("n") = 1,
      py::arg("side_cap") = 1.0);

  mod.def(
      "bmo_loc_norm", [](const RealArray& b, double L) { return bmo_loc_norm(from_real(b, L)).value; },
      py::arg("b"), py::arg("L"));

  mod.def(
      "local_hl_maximal", [](const RealArray& f, double L) { return to_real(local_hl_maximal(from_real(f, L))); },
      py::arg("f"), py::arg("L"));

  mod.def(
      "grand_maximal",
      [](const RealArray& f, double L, const std::string& mode, int N) {
        auto sf = from_real(f, L);
        return to_real(grand_maximal(sf, make_dictionary(N, sf.grid.n, DictionarySpec{}), mode_of(mode)));
      },
      py::arg("f"), py::arg("L"), py::arg("mode") = "nontangential", py::arg("N") = 2);

  mod.def(
      "hardy_quasi_norm",
      [](const RealArray& f, double L, const std::string& weight, double p) {
        auto sf = from_real(f, L);
        auto hp = hardy(p, kInf, -1, sf.grid.n);
        return hardy_quasi_norm(sf, parse_weight(weight, sf.grid), hp,
                                make_dictionary(hp.N, sf.grid.n, DictionarySpec{}));
      },
      py::arg("f"), py::arg("L"), py::arg("weight") = "const:1", py::arg("p") = 1.0);

  mod.def(
      "cz_decompose",
      [](const RealArray& f, double L, double height, double p, int s) {
        auto sf = from_real(f, L);
        auto hp = hardy(p, kInf, s, sf.grid.n);
        auto d = make_dictionary(hp.N, sf.grid.n, DictionarySpec{});
        auto Mf = grand_maximal(sf, d, MaximalMode::nontangential);
        auto dec = cz_decompose(sf, Mf, height * Mf.max_abs(), hp);
        py::list cubes;
        for (std::size_t k = 0; k < dec.size(); ++k) {
          const auto& c = dec.cover.cubes[k].cube;
          cubes.append(py::dict(py::arg("center") = std::vector<double>(c.center.begin(), c.center.begin() + c.n),
                                py::arg("side") = c.side, py::arg("projected") = dec.bad[k].projected));
        }
        return py::dict(py::arg("lambda") = dec.lambda, py::arg("good") = to_real(dec.g), py::arg("cubes") = cubes,
                        py::arg("reconstruction_error") = dec.reconstruction_error,
                        py::arg("orthogonality_residual") = dec.orthogonality_residual);
      },
      py::arg("f"), py::arg("L"), py::arg("height") = 0.5, py::arg("p") = 1.0, py::arg("s") = -1,
      "CZ decomposition at height * max M f.");

  mod.def(
      "atomic_decompose",
      [](const RealArray& f, double L, const std::string& weight, double p, int s) {
        auto sf = from_real(f, L);
        auto hp = hardy(p, kInf, s, sf.grid.n);
        Weight w = parse_weight(weight, sf.grid);
        auto dec = atomic_decompose(sf, w, hp, make_dictionary(hp.N, sf.grid.n, DictionarySpec{}));
        int failing = 0;
        for (auto& e : dec.atoms)
          if (!validate_atom(e.atom, w).pass()) ++failing;
        const auto rec = reconstruct(dec);
        double err = 0.0;
        for (std::size_t i = 0; i < sf.size(); ++i) err = std::max(err, std::abs(rec.values[i] - sf.values[i]));
        return py::dict(py::arg("atoms") = dec.atoms.size(), py::arg("failing") = failing,
                        py::arg("single_atom") = dec.single.has_value(),
                        py::arg("norm_upper") = atomic_norm_upper(dec, hp.p), py::arg("reconstruction") = to_real(rec),
                        py::arg("reconstruction_error") = err / sf.max_abs(),
                        py::arg("telescoping_error") = dec.telescoping_error);
      },
      py::arg("f"), py::arg("L"), py::arg("weight") = "const:1", py::arg("p") = 1.0, py::arg("s") = -1);

  mod.def(
      "strongly_singular_apply",
      [](const ComplexArray& f, double L, double theta, const std::string& rule) {
        StronglySingularKernel k;
        k.theta = theta;
        if (rule == "point")
          k.rule = KernelRule::point;
        else if (rule != "cell")
          throw UsageError("rule must be 'cell' or 'point'");
        return to_complex(strongly_singular_apply(from_complex(f, L), k));
      },
      py::arg("f"), py::arg("L"), py::arg("theta") = 1.0, py::arg("rule") = "cell");

  mod.def(
      "psdo_apply",
      [](const ComplexArray& f, double L, const std::string& symbol) {
        return to_complex(psdo_apply(from_complex(f, L), parse_symbol(symbol)));
      },
      py::arg("f"), py::arg("L"), py::arg("symbol") = "identity");
}
