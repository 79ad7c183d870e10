// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <chrono>
#include <memory>
#include <optional>
#include <string>

#include "promnl/config.hpp"
#include "promnl/engine.hpp"
#include "promnl/errors.hpp"
#include "promnl/prom_client.hpp"
#include "promnl/rpc.hpp"

namespace py = pybind11;
using namespace promnl;

namespace {

class Session {
 public:
  Session(const std::string& catalog, const std::string& prometheus_url, const std::string& bearer_token,
          const std::string& fixtures, bool validate) {
    auto cfg = Config::defaults();
    cfg.apply_environment();
    Catalog cat;
    if (catalog == "builtin:gpu-fixture") {
      cat = gpu_fixture_catalog(cfg);
    } else if (catalog == "builtin:synthetic") {
      cat = synthetic_catalog(cfg);
    } else {
      cat = prepare_catalog(read_file(catalog), cfg);
    }
    std::shared_ptr<PromClient> client;
    if (!fixtures.empty()) {
      client = PromClient::fixtures(fixtures);
    } else if (!prometheus_url.empty()) {
      client = PromClient::http({prometheus_url, bearer_token, std::chrono::seconds(10)});
    }
    EngineOptions opts;
    opts.validate = validate;
    engine_ = std::make_unique<Engine>(std::move(cfg), std::move(cat), std::move(client), opts);
    engine_->start_background();
    rpc_ = std::make_unique<RpcService>(*engine_);
  }

  std::optional<std::string> rpc(const std::string& body) const {
    py::gil_scoped_release release;
    return rpc_->handle_text(body);
  }

  void wait_ready() {
    py::gil_scoped_release release;
    engine_->wait_background();
  }

  bool gpu_ready() const { return engine_->gpu_ready(); }
  std::size_t catalog_size() const { return engine_->store().snapshot()->size(); }
  std::vector<std::string> warnings() const { return engine_->warnings(); }

 private:
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<RpcService> rpc_;
};

}  // namespace

PYBIND11_MODULE(_promnl, m) {
  m.doc() = "Natural-language to PromQL engine";
  static py::exception<Error> error_type(m, "PromnlError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error_type(e.what());
    }
  });

  py::class_<Session>(m, "_Session")
      .def(py::init<const std::string&, const std::string&, const std::string&, const std::string&, bool>(),
           py::arg("catalog") = "builtin:gpu-fixture", py::arg("prometheus_url") = "", py::arg("bearer_token") = "",
           py::arg("fixtures") = "", py::arg("validate") = true)
      .def("rpc", &Session::rpc, py::arg("body"))
      .def("wait_ready", &Session::wait_ready)
      .def_property_readonly("gpu_ready", &Session::gpu_ready)
      .def_property_readonly("catalog_size", &Session::catalog_size)
      .def_property_readonly("warnings", &Session::warnings);
}
