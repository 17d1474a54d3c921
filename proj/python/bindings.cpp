#include <cstdint>
#include <string>
#include <vector>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spikefuse/commands.hpp"
#include "spikefuse/cooperate.hpp"
#include "spikefuse/encoding.hpp"
#include "spikefuse/error.hpp"
#include "spikefuse/eval.hpp"

namespace py = pybind11;
using namespace spikefuse;

namespace {

using ByteArray = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

ByteArray raster_to_array(const SpikeRaster& r) {
  ByteArray out({static_cast<py::ssize_t>(r.rows()), static_cast<py::ssize_t>(r.t_steps())});
  auto view = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < r.rows(); ++i) {
    for (std::size_t t = 0; t < r.t_steps(); ++t) view(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(t)) = r.at(i, t) ? 1 : 0;
  }
  return out;
}

SpikeRaster array_to_raster(const ByteArray& a) {
  if (a.ndim() != 2) throw ConfigError("raster must be a 2-d array");
  const auto view = a.unchecked<2>();
  SpikeRaster r(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) {
    for (py::ssize_t t = 0; t < a.shape(1); ++t) {
      if (view(i, t) != 0) r.set(static_cast<std::size_t>(i), static_cast<std::size_t>(t));
    }
  }
  return r;
}

BitVector array_to_bits(const ByteArray& a) {
  if (a.ndim() != 1) throw ConfigError("code must be a 1-d array");
  BitVector bits;
  const auto view = a.unchecked<1>();
  bits.reserve(static_cast<std::size_t>(a.shape(0)));
  for (py::ssize_t i = 0; i < a.shape(0); ++i) bits.push_back(view(i) != 0);
  return bits;
}

ByteArray bits_to_array(const BitVector& bits) {
  ByteArray out(static_cast<py::ssize_t>(bits.size()));
  auto view = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < bits.size(); ++i) view(static_cast<py::ssize_t>(i)) = bits.test(i) ? 1 : 0;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "spikefuse core bindings";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<EvalEmptyError>(m, "EvalEmptyError", base.ptr());

  m.def(
      "poisson_encode",
      [](const std::vector<double>& values, std::size_t t_steps, double dt, std::uint64_t seed,
         const std::string& concept_name) {
        return raster_to_array(poisson_encode(values, EncodingConfig{t_steps, dt, seed}, concept_name));
      },
      py::arg("values"), py::arg("t_steps") = 1000, py::arg("dt") = 1.0, py::arg("seed") = 42,
      py::arg("concept") = "", "Poisson rate coding of intensities in [0, 1]; returns a (rows, t_steps) 0/1 array.");

  m.def("expected_output_dims", &expected_output_dims, py::arg("d_text"), py::arg("d_ms"), py::arg("t_steps"),
        py::arg("ss"), py::arg("ts"));

  m.def(
      "fuse",
      [](const ByteArray& text, const ByteArray& ms, std::size_t ss, std::size_t ts, const std::string& op) {
        return bits_to_array(fuse_bits(array_to_raster(text), array_to_raster(ms), CooperateConfig{ss, ts, parse_op(op)}));
      },
      py::arg("text"), py::arg("ms"), py::arg("ss") = 1, py::arg("ts") = 1, py::arg("op") = "OR",
      "Spatial then temporal cooperation of a text raster with a multisensory raster.");

  m.def(
      "hamming_similarity",
      [](const ByteArray& a, const ByteArray& b) { return hamming_similarity(array_to_bits(a), array_to_bits(b)); },
      py::arg("a"), py::arg("b"));

  m.def(
      "spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return spearman(x, y); },
      py::arg("x"), py::arg("y"));

  m.def(
      "diversity",
      [](const std::vector<ByteArray>& codes) {
        std::vector<BitVector> bits;
        bits.reserve(codes.size());
        for (const auto& c : codes) bits.push_back(array_to_bits(c));
        return diversity(bits);
      },
      py::arg("codes"));
}
