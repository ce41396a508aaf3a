// Copyright (c) The farmrec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use this file except
// in compliance with the License.  You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed under the License
// is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express
// or implied.  See the License for the specific language governing permissions and limitations
// under the License.
//

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "farmrec/demo.hpp"
#include "farmrec/http.hpp"

namespace py = pybind11;
using namespace farmrec;

namespace {

py::object to_python(const Json& json) { return py::module_::import("json").attr("loads")(json.dump()); }

Json from_python(const py::handle& value) {
  return Json::parse(py::module_::import("json").attr("dumps")(value).cast<std::string>());
}

KeyedValues keyed(const py::dict& values) {
  KeyedValues out;
  for (const auto& [key, value] : values) {
    out.emplace_back(py::str(key).cast<std::string>(), raw_from_json(from_python(value)));
  }
  return out;
}

// Opaque handle; pybind11's variant caster would otherwise unpack Actor.
struct PyActor {
  Actor actor;
  operator const Actor&() const { return actor; }
};

struct PyService {
  std::shared_ptr<ManualClock> clock = std::make_shared<ManualClock>(*Timestamp::from_civil(2022, 12, 20, 11, 35, 0));
  std::unique_ptr<Service> service;

  explicit PyService(std::optional<std::string> data_dir) {
    ServiceOptions options;
    if (data_dir) options.data_dir = *data_dir;
    options.clock = clock;
    service = std::make_unique<Service>(std::move(options));
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Farm activity records core";

  static py::exception<Error> error_type(m, "FarmrecError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetObject(error_type.ptr(), py::make_tuple(std::string(to_string(e.code())), e.what()).ptr());
    }
  });

  py::class_<PyActor>(m, "Actor")
      .def_static("principal", [](const std::string& id) { return PyActor{PrincipalActor{PrincipalId(id)}}; })
      .def_static("form_token", [](const std::string& token) { return PyActor{TokenActor{token}}; })
      .def_static("anonymous", [] { return PyActor{Anonymous{}}; })
      .def("__repr__", [](const PyActor& a) {
        if (const auto* p = std::get_if<PrincipalActor>(&a.actor)) return "Actor.principal('" + p->id.str() + "')";
        if (std::holds_alternative<TokenActor>(a.actor)) return std::string("Actor.form_token(...)");
        return std::string("Actor.anonymous()");
      });

  py::class_<PyService>(m, "Service")
      .def(py::init<std::optional<std::string>>(), py::arg("data_dir") = py::none())
      .def("set_time", [](PyService& s, const std::string& iso) {
        auto ts = parse_timestamp(iso);
        if (!ts) throw Error(ErrorCode::malformed_date, "not a timestamp: " + iso);
        s.clock->set(*ts);
      })
      .def("add_principal", [](PyService& s, const std::string& id) { return s.service->add_principal(PrincipalId(id)); })
      .def("authenticate", [](PyService& s, const std::string& bearer) { return PyActor{s.service->authenticate(bearer)}; })
      .def("create_base",
           [](PyService& s, const PyActor& a, const std::string& name, std::optional<std::string> tmpl) {
             return to_python(s.service->create_base(a, name, tmpl));
           },
           py::arg("actor"), py::arg("name"), py::arg("template") = py::none())
      .def("get_base", [](PyService& s, const PyActor& a, const std::string& base) {
        return to_python(s.service->get_base(a, base));
      })
      .def("insert_record",
           [](PyService& s, const PyActor& a, const std::string& base, const std::string& table, const py::dict& cells) {
             auto r = s.service->insert_record(a, base, table, keyed(cells));
             return to_python(record_view_json(r.table, r.record));
           })
      .def("query",
           [](PyService& s, const PyActor& a, const std::string& base, const std::string& table,
              const std::vector<std::tuple<std::string, std::string, std::string>>& filters) {
             std::vector<FilterSpec> specs;
             for (const auto& [field, op, value] : filters) specs.push_back({field, op, value});
             auto result = s.service->query(a, base, table, specs);
             py::list out;
             for (const auto& r : result.records) out.append(to_python(record_view_json(result.table, r)));
             return out;
           },
           py::arg("actor"), py::arg("base"), py::arg("table"),
           py::arg("filters") = std::vector<std::tuple<std::string, std::string, std::string>>{})
      .def("render_form",
           [](PyService& s, const PyActor& a, const std::string& form, const py::dict& draft) {
             return to_python(to_json(s.service->render_form(a, FormId(form), keyed(draft))));
           },
           py::arg("actor"), py::arg("form"), py::arg("draft") = py::dict())
      .def("submit",
           [](PyService& s, const PyActor& a, const std::string& form, const py::dict& answers,
              const std::vector<std::pair<std::string, std::string>>& new_options,
              std::optional<std::string> key) {
             std::vector<NewOptionRequest> additions;
             for (const auto& [field, label] : new_options) additions.push_back({field, label});
             auto r = s.service->submit(a, FormId(form), keyed(answers), additions, key);
             auto json = record_view_json(r.table, r.record);
             json["replayed"] = r.replayed;
             return to_python(json);
           },
           py::arg("actor"), py::arg("form"), py::arg("answers"),
           py::arg("new_options") = std::vector<std::pair<std::string, std::string>>{},
           py::arg("idempotency_key") = py::none())
      .def("set_grant",
           [](PyService& s, const PyActor& a, const std::string& base, const std::string& principal,
              const std::string& role) {
             auto parsed = parse_role(role);
             if (!parsed) throw Error(ErrorCode::invalid_request, "unknown role '" + role + "'");
             s.service->set_grant(a, base, PrincipalId(principal), *parsed);
           })
      .def("mint_form_token", [](PyService& s, const PyActor& a, const std::string& form) {
        return s.service->mint_form_token(a, FormId(form)).token;
      })
      .def("export_csv",
           [](PyService& s, const PyActor& a, const std::string& base, const std::string& table,
              const std::string& preset) {
             return s.service->export_csv(a, base, table, ExportConfig::preset(preset));
           },
           py::arg("actor"), py::arg("base"), py::arg("table"), py::arg("preset") = "iso")
      .def("import_csv",
           [](PyService& s, const PyActor& a, const std::string& base, const std::string& table,
              const std::string& bytes, const std::string& mode) {
             auto result = s.service->import_csv(a, base, table, bytes,
                                                 mode == "lenient" ? ImportMode::lenient : ImportMode::strict);
             py::list errors;
             for (const auto& e : result.errors) {
               errors.append(py::make_tuple(e.row, e.field, std::string(to_string(e.code)), e.message));
             }
             return py::make_tuple(result.inserted, errors);
           },
           py::arg("actor"), py::arg("base"), py::arg("table"), py::arg("bytes"), py::arg("mode") = "strict")
      .def("run_demo",
           [](PyService& s, const PyActor& a, const std::string& base) {
             std::vector<std::string> ids;
             for (const auto& id : run_demo(*s.service, *s.clock, a, base)) ids.push_back(id.str());
             return ids;
           })
      .def("journal_seq", [](PyService& s, const std::string& base) {
        return s.service->journal_seq(s.service->resolve_base(base));
      });

  m.def("templates", [] {
    py::list out;
    for (const auto& t : list_templates()) out.append(py::make_tuple(t.id, t.title));
    return out;
  });
  m.def("openapi", [] { return to_python(http::openapi_document()); });
  m.def("http_request",
        [](PyService& s, const std::string& method, const std::string& path, const std::string& body,
           const std::map<std::string, std::string>& headers) {
          http::Request request;
          request.method = method;
          request.path = path;
          request.body = body;
          for (const auto& [k, v] : headers) {
            std::string key = k;
            for (auto& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            request.headers[key] = v;
          }
          auto response = http::dispatch(*s.service, request);
          return py::make_tuple(response.status, response.content_type, response.body);
        },
        py::arg("service"), py::arg("method"), py::arg("path"), py::arg("body") = "",
        py::arg("headers") = std::map<std::string, std::string>{});
}
