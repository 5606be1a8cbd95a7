#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "svrc/blocks.hpp"
#include "svrc/codec.hpp"
#include "svrc/csf.hpp"
#include "svrc/dct.hpp"
#include "svrc/jpeg_baseline.hpp"
#include "svrc/metrics.hpp"
#include "svrc/normalization.hpp"
#include "svrc/pgm.hpp"
#include "svrc/quantize.hpp"
#include "svrc/range_coder.hpp"
#include "svrc/svr.hpp"

namespace py = pybind11;

namespace {

svrc::GrayImage image_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2) throw py::value_error("image must be a 2D uint8 array");
  svrc::GrayImage img;
  img.height = static_cast<int>(arr.shape(0));
  img.width = static_cast<int>(arr.shape(1));
  img.samples.assign(arr.data(), arr.data() + arr.size());
  return img;
}

py::array_t<std::uint8_t> image_to_array(const svrc::GrayImage& img) {
  py::array_t<std::uint8_t> arr({img.height, img.width});
  std::copy(img.samples.begin(), img.samples.end(), arr.mutable_data());
  return arr;
}

svrc::Block block_from_array(const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.size() != svrc::kBlockCells) throw py::value_error("block must hold 16x16 values");
  svrc::Block b;
  std::copy(arr.data(), arr.data() + svrc::kBlockCells, b.begin());
  return b;
}

py::array_t<double> block_to_array(const svrc::Block& b) {
  py::array_t<double> arr({svrc::kBlockSize, svrc::kBlockSize});
  std::copy(b.begin(), b.end(), arr.mutable_data());
  return arr;
}

svrc::NormParams params_or_default(const std::optional<svrc::NormParams>& p) {
  return p ? *p : svrc::NormParams::defaults();
}

std::vector<svrc::Position> positions_from_array(
    const py::array_t<double, py::array::c_style | py::array::forcecast>& arr) {
  if (arr.ndim() != 2 || arr.shape(1) != 2) throw py::value_error("positions must be an (N,2) array");
  std::vector<svrc::Position> out(static_cast<std::size_t>(arr.shape(0)));
  for (py::ssize_t k = 0; k < arr.shape(0); ++k) out[k] = {arr.at(k, 0), arr.at(k, 1)};
  return out;
}

}  // namespace

PYBIND11_MODULE(_svrc, m) {
  m.doc() = "SVR image codec core: transforms, divisive normalization, "
            "epsilon-insensitive SVR, codec, metrics";

  py::register_exception<svrc::Error>(m, "SvrcError", PyExc_RuntimeError);

  m.def("load_pgm", [](const std::string& path) { return image_to_array(svrc::load_pgm_file(path)); },
        py::arg("path"), "Load a binary PGM (P5, maxval 255) file as a 2D uint8 array.");
  m.def("save_pgm",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
           const std::string& path) { svrc::save_pgm_file(image_from_array(img), path); },
        py::arg("image"), py::arg("path"));

  m.def("dct2_forward",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
          return block_to_array(svrc::dct2_forward(block_from_array(b)));
        },
        py::arg("block"), "Orthonormal 2D DCT of a 16x16 block.");
  m.def("dct2_inverse",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& b) {
          return block_to_array(svrc::dct2_inverse(block_from_array(b)));
        },
        py::arg("coeffs"));

  m.def("coeff_frequency",
        [](int i, int j, double samples_per_degree) {
          return svrc::coeff_frequency(i, j, svrc::ViewingGeometry{samples_per_degree});
        },
        py::arg("i"), py::arg("j"), py::arg("samples_per_degree") = 256.0 / 3.0,
        "Spatial frequency (cycles/degree) of coefficient (i, j).");
  m.def("csf_weight", &svrc::csf_weight, py::arg("f_cpd"), py::arg("floor") = svrc::kCsfFloor);

  m.def("build_interaction_matrix",
        [](double samples_per_degree, double c0, double c1) {
          return svrc::build_interaction_matrix(svrc::ViewingGeometry{samples_per_degree}, c0, c1);
        },
        py::arg("samples_per_degree") = 256.0 / 3.0, py::arg("c0") = 0.5, py::arg("c1") = 0.2);

  py::class_<svrc::NormParams>(m, "NormParams")
      .def_static("defaults",
                  [](double samples_per_degree) {
                    return svrc::NormParams::defaults(svrc::ViewingGeometry{samples_per_degree});
                  },
                  py::arg("samples_per_degree") = 256.0 / 3.0)
      .def_static("from_file", &svrc::NormParams::from_file, py::arg("path"))
      .def_readonly("alpha", &svrc::NormParams::alpha)
      .def_readonly("beta", &svrc::NormParams::beta)
      .def_readonly("gamma", &svrc::NormParams::gamma)
      .def_readonly("H", &svrc::NormParams::H)
      .def("digest", &svrc::NormParams::digest);

  m.def("normalize_forward",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
           const std::optional<svrc::NormParams>& p) {
          return block_to_array(svrc::normalize_forward(block_from_array(y), params_or_default(p)));
        },
        py::arg("y"), py::arg("params") = std::nullopt);
  m.def("normalize_inverse",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& r,
           const std::optional<svrc::NormParams>& p) {
          return block_to_array(svrc::normalize_inverse(block_from_array(r), params_or_default(p)));
        },
        py::arg("r"), py::arg("params") = std::nullopt);
  m.def("normalize_jacobian",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& y,
           const std::optional<svrc::NormParams>& p) {
          return svrc::normalize_jacobian(block_from_array(y), params_or_default(p));
        },
        py::arg("y"), py::arg("params") = std::nullopt);
  m.def("diagonality_ratio", &svrc::diagonality_ratio, py::arg("matrix"),
        "Off-diagonal share of the absolute mass; 0 for a diagonal matrix.");

  py::class_<svrc::SvrModel>(m, "SvrModel")
      .def_property_readonly("sigma", [](const svrc::SvrModel& m_) { return m_.sigma; })
      .def_property_readonly("positions",
                             [](const svrc::SvrModel& m_) {
                               py::array_t<double> arr({static_cast<py::ssize_t>(m_.support.size()),
                                                        static_cast<py::ssize_t>(2)});
                               for (std::size_t k = 0; k < m_.support.size(); ++k) {
                                 arr.mutable_at(k, 0) = m_.support[k].input[0];
                                 arr.mutable_at(k, 1) = m_.support[k].input[1];
                               }
                               return arr;
                             })
      .def_property_readonly("weights",
                             [](const svrc::SvrModel& m_) {
                               py::array_t<double> arr(static_cast<py::ssize_t>(m_.support.size()));
                               for (std::size_t k = 0; k < m_.support.size(); ++k)
                                 arr.mutable_at(k) = m_.support[k].weight;
                               return arr;
                             })
      .def("predict",
           [](const svrc::SvrModel& m_,
              const py::array_t<double, py::array::c_style | py::array::forcecast>& q) {
             return svrc::predict_svr(m_, positions_from_array(q));
           },
           py::arg("queries"));

  m.def("fit_svr",
        [](const py::array_t<double, py::array::c_style | py::array::forcecast>& inputs,
           const std::vector<double>& targets, const std::vector<double>& eps, double sigma, double C) {
          svrc::TrainingSet ts;
          ts.inputs = positions_from_array(inputs);
          ts.targets = targets;
          ts.eps = eps;
          return svrc::fit_svr(ts, sigma, C);
        },
        py::arg("inputs"), py::arg("targets"), py::arg("eps"), py::arg("sigma"),
        py::arg("C") = svrc::kDefaultPenalty,
        "Bias-free epsilon-insensitive SVR with an RBF kernel.");

  m.def("build_eps_profile",
        [](const std::string& method, double eps0, double scale, double samples_per_degree) {
          auto prof = svrc::build_eps_profile(svrc::method_from_name(method), eps0, scale,
                                              svrc::ViewingGeometry{samples_per_degree});
          py::array_t<double> eps(svrc::kBlockCells);
          py::array_t<bool> active(svrc::kBlockCells);
          for (int f = 0; f < svrc::kBlockCells; ++f) {
            eps.mutable_at(f) = prof.eps[f];
            active.mutable_at(f) = prof.active[f];
          }
          return py::make_tuple(eps, active);
        },
        py::arg("method"), py::arg("eps0"), py::arg("scale") = 1.0,
        py::arg("samples_per_degree") = 256.0 / 3.0);

  m.def("encode",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img,
           const std::string& method, double eps0, double scale, double sigma, int bits,
           const std::optional<svrc::NormParams>& p) {
          svrc::EncodeSettings s;
          s.method = svrc::method_from_name(method);
          s.eps0 = eps0;
          s.scale = scale;
          s.sigma = sigma;
          s.quant_bits = bits;
          auto bytes = svrc::encode_to_bytes(image_from_array(img), s, params_or_default(p));
          return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("image"), py::arg("method") = "nl-svr", py::arg("eps0") = 0.02,
        py::arg("scale") = 1.0, py::arg("sigma") = 0.025, py::arg("bits") = 5,
        py::arg("params") = std::nullopt);

  m.def("decode",
        [](const py::bytes& data, const std::optional<svrc::NormParams>& p) {
          std::string str = data;
          std::vector<std::uint8_t> bytes(str.begin(), str.end());
          return image_to_array(svrc::decode_from_bytes(bytes, params_or_default(p)));
        },
        py::arg("data"), py::arg("params") = std::nullopt);

  m.def("rmse",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& b) {
          return svrc::rmse(image_from_array(a), image_from_array(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("mpe",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& b,
           const std::optional<svrc::NormParams>& p) {
          return svrc::mpe(image_from_array(a), image_from_array(b), params_or_default(p));
        },
        py::arg("a"), py::arg("b"), py::arg("params") = std::nullopt);
  m.def("ssim",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& a,
           const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& b) {
          return svrc::ssim(image_from_array(a), image_from_array(b));
        },
        py::arg("a"), py::arg("b"));

  m.def("jpeg_baseline",
        [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& img, int quality) {
          auto res = svrc::jpeg_baseline(image_from_array(img), quality);
          return py::make_tuple(res.byte_size, image_to_array(res.decoded));
        },
        py::arg("image"), py::arg("quality"),
        "JPEG-like baseline; returns (coded byte count, decoded image).");

  m.def("entropy_code",
        [](const std::vector<int>& symbols, int alphabet) {
          auto bytes = svrc::entropy_code(symbols, alphabet);
          return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
        },
        py::arg("symbols"), py::arg("alphabet"));
  m.def("entropy_decode",
        [](const py::bytes& data, std::size_t count, int alphabet) {
          std::string str = data;
          std::vector<std::uint8_t> bytes(str.begin(), str.end());
          return svrc::entropy_decode(bytes, count, alphabet);
        },
        py::arg("data"), py::arg("count"), py::arg("alphabet"));

  m.def("quantize_weights",
        [](const std::vector<double>& w, int bits, double w_max) {
          return svrc::quantize_weights(w, svrc::QuantizerSpec{bits, w_max});
        },
        py::arg("weights"), py::arg("bits"), py::arg("w_max"));
  m.def("dequantize_weights",
        [](const std::vector<int>& symbols, int bits, double w_max) {
          return svrc::dequantize_weights(symbols, svrc::QuantizerSpec{bits, w_max});
        },
        py::arg("symbols"), py::arg("bits"), py::arg("w_max"));
}
