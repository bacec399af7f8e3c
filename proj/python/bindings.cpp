#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "pnml/dataset.hpp"
#include "pnml/oracle.hpp"
#include "pnml/prediction.hpp"
#include "pnml/regression.hpp"
#include "pnml/spectral.hpp"

namespace py = pybind11;

PYBIND11_MODULE(_core, m) {
  m.doc() = "pNML linear regression: analytic predictive densities, regret, "
            "learnable-space analysis and the brute-force oracle.";

  py::register_exception<pnml::CsvError>(m, "CsvError", PyExc_ValueError);

  py::class_<pnml::Dataset>(m, "Dataset",
                            "Training pairs; features is M x N with one sample per column.")
      .def(py::init<Eigen::MatrixXd, Eigen::VectorXd>(), py::arg("features"), py::arg("labels"))
      .def_static("empty", &pnml::Dataset::empty, py::arg("dim"))
      .def_property_readonly("features", &pnml::Dataset::features)
      .def_property_readonly("labels", &pnml::Dataset::labels)
      .def_property_readonly("dim", &pnml::Dataset::dim)
      .def_property_readonly("size", &pnml::Dataset::size)
      .def("with_sample", &pnml::Dataset::with_sample, py::arg("x"), py::arg("y"))
      .def("__len__", &pnml::Dataset::size)
      .def("__repr__", [](const pnml::Dataset& d) {
        std::ostringstream out;
        out << "Dataset(M=" << d.dim() << ", N=" << d.size() << ")";
        return out.str();
      });

  py::class_<pnml::RidgeConfig>(m, "RidgeConfig")
      .def(py::init<double, double>(), py::arg("lambda_") = 0.0, py::arg("sigma2") = 1.0)
      .def_readwrite("lambda_", &pnml::RidgeConfig::lambda)
      .def_readwrite("sigma2", &pnml::RidgeConfig::sigma2);

  py::class_<pnml::FittedModel>(m, "FittedModel")
      .def_property_readonly("theta", &pnml::FittedModel::theta)
      .def_property_readonly("p_matrix", &pnml::FittedModel::p_matrix)
      .def_property_readonly("lambda_", &pnml::FittedModel::lambda)
      .def_property_readonly("n_samples", &pnml::FittedModel::n_samples);

  py::class_<pnml::ConfidenceInterval>(m, "ConfidenceInterval")
      .def_readonly("center", &pnml::ConfidenceInterval::center)
      .def_readonly("halfwidth", &pnml::ConfidenceInterval::halfwidth)
      .def_readonly("coverage", &pnml::ConfidenceInterval::coverage);

  py::class_<pnml::PnmlPrediction>(m, "PnmlPrediction")
      .def_readonly("y_hat", &pnml::PnmlPrediction::y_hat)
      .def_readonly("h", &pnml::PnmlPrediction::h)
      .def_readonly("k_factor", &pnml::PnmlPrediction::k_factor)
      .def_readonly("regret", &pnml::PnmlPrediction::regret)
      .def_readonly("sigma2", &pnml::PnmlPrediction::sigma2)
      .def_property_readonly("learnable", &pnml::PnmlPrediction::learnable);

  py::class_<pnml::GenieFit>(m, "GenieFit")
      .def_readonly("theta_hat", &pnml::GenieFit::theta_hat)
      .def_readonly("hypothetical_label", &pnml::GenieFit::hypothetical_label);

  py::class_<pnml::spectral::SpectralReport>(m, "SpectralReport")
      .def_readonly("eigenvalues", &pnml::spectral::SpectralReport::eigenvalues)
      .def_readonly("eigenvectors", &pnml::spectral::SpectralReport::eigenvectors)
      .def_readonly("projections", &pnml::spectral::SpectralReport::projections)
      .def_readonly("contributions", &pnml::spectral::SpectralReport::contributions)
      .def_readonly("gamma", &pnml::spectral::SpectralReport::gamma)
      .def_readonly("regret", &pnml::spectral::SpectralReport::regret)
      .def_readonly("n_samples", &pnml::spectral::SpectralReport::n_samples)
      .def_property_readonly("lambda_note", [](const pnml::spectral::SpectralReport& r) {
        return std::string(r.lambda_note);
      });

  py::class_<pnml::spectral::ProfileEntry>(m, "ProfileEntry")
      .def_readonly("gamma", &pnml::spectral::ProfileEntry::gamma)
      .def_readonly("regret", &pnml::spectral::ProfileEntry::regret)
      .def_readonly("top_contribution", &pnml::spectral::ProfileEntry::top_contribution);

  py::class_<pnml::oracle::QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<double, int>(), py::arg("half_width_sigmas") = 12.0,
           py::arg("points_per_sigma") = 64)
      .def_readwrite("half_width_sigmas", &pnml::oracle::QuadratureSpec::half_width_sigmas)
      .def_readwrite("points_per_sigma", &pnml::oracle::QuadratureSpec::points_per_sigma);

  m.def("build_vandermonde", &pnml::build_vandermonde, py::arg("points"), py::arg("degree"));
  m.def("fit_ridge", &pnml::fit_ridge, py::arg("data"), py::arg("cfg"));
  m.def("predict", &pnml::predict, py::arg("model"), py::arg("x"));
  m.def("rls_update", &pnml::rls_update, py::arg("model"), py::arg("x"), py::arg("y"));
  m.def("leverage", &pnml::leverage, py::arg("data"), py::arg("i"), py::arg("lambda_"));
  m.def("confidence_interval", &pnml::confidence_interval, py::arg("model"), py::arg("x"),
        py::arg("sigma2_hat"), py::arg("coverage"));

  m.def("genie_fit", &pnml::genie_fit, py::arg("data"), py::arg("x"), py::arg("y"),
        py::arg("cfg"));
  m.def("pnml_predict", &pnml::pnml_predict, py::arg("data"), py::arg("x"), py::arg("cfg"));
  m.def("density_at", &pnml::density_at, py::arg("pred"), py::arg("y"));
  m.def("regret", &pnml::regret, py::arg("data"), py::arg("x"), py::arg("lambda_"));
  m.def("genie_density_at", &pnml::genie_density_at, py::arg("data"), py::arg("x"), py::arg("y"),
        py::arg("cfg"));
  m.def("log_loss", &pnml::log_loss, py::arg("pred"), py::arg("y_true"));

  m.def("correlation_matrix", &pnml::spectral::correlation_matrix, py::arg("data"));
  m.def("analyze", &pnml::spectral::analyze, py::arg("data"), py::arg("x"));
  m.def("learnability_profile", &pnml::spectral::learnability_profile, py::arg("data"),
        py::arg("xs"));

  m.def("numeric_k", &pnml::oracle::numeric_k, py::arg("data"), py::arg("x"), py::arg("cfg"),
        py::arg("quad") = pnml::oracle::QuadratureSpec{});
  m.def("numeric_density_check", &pnml::oracle::numeric_density_check, py::arg("data"),
        py::arg("x"), py::arg("cfg"), py::arg("ys"));
  m.def("genie_refit_density", &pnml::oracle::genie_refit_density, py::arg("data"), py::arg("x"),
        py::arg("y"), py::arg("cfg"));

  m.def(
      "read_dataset_csv",
      [](const std::filesystem::path& path) { return pnml::read_dataset_csv(path); },
      py::arg("path"));
  m.def(
      "write_dataset_csv",
      [](const pnml::Dataset& data, const std::filesystem::path& path) {
        pnml::write_dataset_csv(data, path);
      },
      py::arg("data"), py::arg("path"));
}
