#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <string>
#include <vector>

#include "pathrobust/corruption.hpp"
#include "pathrobust/error.hpp"
#include "pathrobust/harness/config.hpp"
#include "pathrobust/metrics.hpp"

namespace py = pybind11;
using namespace pathrobust;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::forcecast>;

CorruptionKind kind_from(const std::string& name) {
  const auto kind = parse_kind(name);
  if (!kind) throw ValidationError("unknown corruption kind '" + name + "'");
  return *kind;
}

SeverityTable table_from(const std::string& table_json) {
  if (table_json.empty()) return SeverityTable::defaults();
  return harness::severity_table_from_json(nlohmann::json::parse(table_json));
}

RasterImage image_from(const py::array& array) {
  if (!py::isinstance<py::array_t<std::uint8_t>>(array)) {
    throw ValidationError("image must have dtype uint8, got " + std::string(py::str(array.dtype())));
  }
  if (array.ndim() != 3 || array.shape(2) != 3) {
    throw ValidationError("image must have shape (H, W, 3)");
  }
  if (!(array.flags() & py::array::c_style)) {
    throw ValidationError("image must be C-contiguous (use numpy.ascontiguousarray)");
  }
  const auto h = static_cast<int>(array.shape(0));
  const auto w = static_cast<int>(array.shape(1));
  std::vector<std::uint8_t> data(static_cast<std::size_t>(w) * h * 3);
  if (!data.empty()) std::memcpy(data.data(), array.data(), data.size());
  return RasterImage(w, h, std::move(data));
}

py::array_t<std::uint8_t> image_to(const RasterImage& image) {
  py::array_t<std::uint8_t> out({image.height(), image.width(), 3});
  const auto px = image.pixels();
  std::memcpy(out.mutable_data(), px.data(), px.size());
  return out;
}

py::array_t<std::uint8_t> apply(const py::array& image, const std::string& kind, int severity,
                                std::uint64_t seed, const std::string& table_json) {
  const auto table = table_from(table_json);
  const auto img = image_from(image);
  const CorruptionSpec spec{kind_from(kind), Severity(severity), seed};
  RasterImage out{1, 1};
  {
    py::gil_scoped_release release;
    out = apply_corruption(img, spec, table);
  }
  return image_to(out);
}

ConfidenceSequence sequence_from(const std::vector<double>& values) {
  if (values.size() != kNumSeverities + 1) {
    throw ValidationError("confidence sequence must have " + std::to_string(kNumSeverities + 1) + " values");
  }
  ConfidenceSequence seq;
  for (std::size_t i = 0; i < values.size(); ++i) seq.values[i] = values[i];
  return seq;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Pathology image corruptions and robustness metrics";

  // Translators run newest first, so the base class is registered first.
  py::register_exception<Error>(m, "PathrobustError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("kind_names", [] {
    std::vector<std::string> names;
    for (const auto kind : kAllKinds) names.emplace_back(kind_name(kind));
    return names;
  });
  m.def("severity_table_json",
        [](const std::string& table_json) { return harness::severity_table_to_json(table_from(table_json)).dump(); },
        py::arg("table_json") = "");
  m.def("apply_corruption", &apply, py::arg("image"), py::arg("kind"), py::arg("severity"), py::arg("seed"),
        py::arg("table_json") = "");
  m.def("derive_seed",
        [](std::uint64_t run_seed, const std::string& sample_id, const std::string& kind, int severity) {
          return derive_seed(run_seed, sample_id, kind_from(kind), Severity(severity));
        },
        py::arg("run_seed"), py::arg("sample_id"), py::arg("kind"), py::arg("severity"));
  m.def("kendall_swaps", [](const std::vector<double>& values) { return kendall_swaps(values); });
  m.def("cec", [](const std::vector<std::vector<double>>& sequences) {
    std::vector<ConfidenceSequence> seqs;
    for (const auto& s : sequences) seqs.push_back(sequence_from(s));
    return cec(seqs);
  });
  m.def("pearson_r",
        [](const std::vector<double>& xs, const std::vector<double>& ys) { return pearson_r(xs, ys); });
  m.def("relative_ce", &relative_ce, py::arg("ce"), py::arg("clean_error"));
  m.def("psnr", [](const py::array& a, const py::array& b) { return psnr(image_from(a), image_from(b)); });
}
