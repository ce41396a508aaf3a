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

#include "farmrec/http.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>

namespace farmrec::http {

namespace {

using Params = std::map<std::string, std::string>;

struct Context {
  Service& service;
  const Request& request;
  Params params;
  Actor actor;
};

using Handler = std::function<Response(Context&)>;

struct Route {
  RouteInfo info;
  Handler handler;
};

std::string lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  return text;
}

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= path.size()) {
    auto slash = path.find('/', start);
    if (slash == std::string_view::npos) slash = path.size();
    if (slash > start) out.emplace_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return out;
}

std::optional<Params> match(const std::string& pattern, const std::vector<std::string>& path) {
  auto parts = segments(pattern);
  if (parts.size() != path.size()) return std::nullopt;
  Params params;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].front() == '{') {
      params[parts[i].substr(1, parts[i].size() - 2)] = path[i];
    } else if (parts[i] != path[i]) {
      return std::nullopt;
    }
  }
  return params;
}

Response json_response(int status, const Json& body) {
  return Response{status, "application/json", body.dump(), {}};
}

Json parse_body(const Request& request) {
  if (request.body.empty()) return Json::object();
  try {
    auto body = Json::parse(request.body);
    if (!body.is_object()) throw Error(ErrorCode::invalid_request, "request body must be a JSON object");
    return body;
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_request, std::string("malformed JSON body: ") + e.what());
  }
}

std::string string_member(const Json& body, const char* key, bool required = true) {
  if (!body.contains(key) || body[key].is_null()) {
    if (required) throw Error(ErrorCode::invalid_request, std::string("missing '") + key + "'", key);
    return {};
  }
  if (!body[key].is_string()) throw Error(ErrorCode::invalid_request, std::string("'") + key + "' must be a string", key);
  return body[key].get<std::string>();
}

KeyedValues values_member(const Json& body, const char* key) {
  KeyedValues values;
  if (!body.contains(key)) return values;
  if (!body[key].is_object()) throw Error(ErrorCode::invalid_request, std::string("'") + key + "' must be an object", key);
  for (const auto& [name, value] : body[key].items()) values.emplace_back(name, raw_from_json(value));
  return values;
}

// Query parameters as draft values; repeated keys become lists.
KeyedValues query_values(const Request& request) {
  KeyedValues values;
  for (auto it = request.query.begin(); it != request.query.end();) {
    auto [first, last] = request.query.equal_range(it->first);
    if (std::distance(first, last) == 1) {
      values.emplace_back(first->first, RawValue(first->second));
    } else {
      std::vector<std::string> items;
      for (auto i = first; i != last; ++i) items.push_back(i->second);
      values.emplace_back(first->first, RawValue(std::move(items)));
    }
    it = last;
  }
  return values;
}

std::optional<std::string> query_param(const Request& request, const std::string& name) {
  auto it = request.query.find(name);
  if (it == request.query.end()) return std::nullopt;
  return it->second;
}

bool flag(const std::string& text, const std::string& name) {
  auto value = lower(text);
  if (value == "1" || value == "true" || value == "yes") return true;
  if (value == "0" || value == "false" || value == "no") return false;
  throw Error(ErrorCode::invalid_request, "'" + name + "' must be true or false", name);
}

ExportConfig export_config(const Request& request) {
  ExportConfig config;
  if (auto preset = query_param(request, "format")) config = ExportConfig::preset(*preset);
  if (auto v = query_param(request, "datetime_format")) {
    // Preset names are accepted here too, mirroring the CLI flag.
    if (*v == "table1" || *v == "iso") {
      config = ExportConfig::preset(*v);
    } else {
      config.datetime_format = *v;
    }
  }
  if (auto v = query_param(request, "date_format")) config.date_format = *v;
  if (auto v = query_param(request, "joiner")) config.multi_value_joiner = *v;
  if (auto v = query_param(request, "line_ending")) {
    if (*v == "crlf") {
      config.line_ending = "\r\n";
    } else if (*v == "lf") {
      config.line_ending = "\n";
    } else {
      throw Error(ErrorCode::invalid_request, "line_ending must be crlf or lf", "line_ending");
    }
  }
  if (auto v = query_param(request, "header")) config.include_header = flag(*v, "header");
  if (auto v = query_param(request, "bom")) config.byte_order_mark = flag(*v, "bom");
  return config;
}

Json record_list(const TableSpec& table, const std::vector<Record>& records) {
  Json list = Json::array();
  for (const auto& record : records) list.push_back(record_view_json(table, record));
  return Json{{"table", table.id.str()}, {"records", std::move(list)}};
}

Json import_errors(const std::vector<ImportError>& errors) {
  Json list = Json::array();
  for (const auto& error : errors) {
    list.push_back(Json{{"row", error.row},
                        {"field", error.field},
                        {"code", std::string(to_string(error.code))},
                        {"message", error.message}});
  }
  return list;
}

std::vector<NewOptionRequest> new_options(const Json& body) {
  std::vector<NewOptionRequest> out;
  if (!body.contains("new_options")) return out;
  if (!body["new_options"].is_array()) throw Error(ErrorCode::invalid_request, "'new_options' must be a list");
  for (const auto& item : body["new_options"]) {
    out.push_back(NewOptionRequest{string_member(item, "field"), string_member(item, "label")});
  }
  return out;
}

std::optional<std::string> idempotency_key(const Request& request) {
  auto key = request.header("idempotency-key");
  if (key.empty()) return std::nullopt;
  return key;
}

Response submit_response(const SubmitResult& result) {
  auto response = json_response(result.replayed ? 200 : 201, record_view_json(result.table, result.record));
  if (result.replayed) response.headers["Idempotent-Replayed"] = "true";
  return response;
}

FilterSpec parse_filter(const std::string& text) {
  auto first = text.find(':');
  if (first == std::string::npos) throw Error(ErrorCode::invalid_request, "filter must be field:op[:value]", "filter");
  auto second = text.find(':', first + 1);
  FilterSpec filter;
  filter.field = text.substr(0, first);
  if (second == std::string::npos) {
    filter.op = text.substr(first + 1);
  } else {
    filter.op = text.substr(first + 1, second - first - 1);
    filter.value = text.substr(second + 1);
  }
  return filter;
}

SortSpec parse_sort(const std::string& text) {
  auto colon = text.rfind(':');
  if (colon == std::string::npos) return SortSpec{text, true};
  auto direction = lower(text.substr(colon + 1));
  if (direction != "asc" && direction != "desc") {
    throw Error(ErrorCode::invalid_request, "sort direction must be asc or desc", "sort");
  }
  return SortSpec{text.substr(0, colon), direction == "asc"};
}

Json template_json(const Template& t) {
  return Json{{"id", t.id}, {"title", t.title}, {"description", t.description}, {"documentation", t.documentation}};
}

const std::vector<Route>& route_table() {
  static const std::vector<Route> table = [] {
    std::vector<Route> r;
    auto add = [&](std::string method, std::string pattern, std::string summary, Handler handler,
                   bool form_token = false) {
      r.push_back(Route{RouteInfo{std::move(method), std::move(pattern), std::move(summary), form_token},
                        std::move(handler)});
    };

    add("POST", "/bases", "Create a base, optionally from a template", [](Context& c) {
      auto body = parse_body(c.request);
      auto name = string_member(body, "name");
      auto tmpl = string_member(body, "template", false);
      return json_response(201, c.service.create_base(c.actor, name, tmpl.empty() ? std::nullopt
                                                                                   : std::optional(tmpl)));
    });
    add("GET", "/bases/{base}", "Base document with tables, forms and grants", [](Context& c) {
      return json_response(200, c.service.get_base(c.actor, c.params["base"]));
    });
    add("POST", "/bases/{base}/tables", "Create a table", [](Context& c) {
      auto body = parse_body(c.request);
      std::vector<FieldSpec> fields;
      for (const auto& item : body.value("fields", Json::array())) {
        auto json = item;
        if (!json.contains("id")) json["id"] = fresh_id<FieldId>("fld").str();
        fields.push_back(field_from_json(json));
      }
      return json_response(201, to_json(c.service.create_table(c.actor, c.params["base"],
                                                               string_member(body, "name"), std::move(fields))));
    });
    add("POST", "/bases/{base}/tables/{table}/fields", "Append a field", [](Context& c) {
      auto body = parse_body(c.request);
      if (!body.contains("id")) body["id"] = fresh_id<FieldId>("fld").str();
      return json_response(201, to_json(c.service.add_field(c.actor, c.params["base"], c.params["table"],
                                                            field_from_json(body))));
    });
    add("POST", "/bases/{base}/tables/{table}/fields/{field}/options", "Add an option to a select field",
        [](Context& c) {
          auto body = parse_body(c.request);
          auto result = c.service.add_option(c.actor, c.params["base"], c.params["table"], c.params["field"],
                                             string_member(body, "label"));
          return json_response(result.created ? 201 : 200,
                               Json{{"field", to_json(result.field)}, {"option", to_json(*result.field.options->find(result.option))},
                                    {"created", result.created}});
        });
    add("POST", "/bases/{base}/forms", "Create or replace a form", [](Context& c) {
      auto body = parse_body(c.request);
      if (!body.contains("id")) body["id"] = "";
      return json_response(201, to_json(c.service.save_form(c.actor, c.params["base"], form_from_json(body))));
    });
    add("GET", "/bases/{base}/tables/{table}/records", "Query records (filter=field:op:value, sort=field:asc|desc)",
        [](Context& c) {
          std::vector<FilterSpec> filters;
          auto [first, last] = c.request.query.equal_range("filter");
          for (auto it = first; it != last; ++it) filters.push_back(parse_filter(it->second));
          std::optional<SortSpec> sort;
          if (auto s = query_param(c.request, "sort")) sort = parse_sort(*s);
          auto result = c.service.query(c.actor, c.params["base"], c.params["table"], filters, sort);
          return json_response(200, record_list(result.table, result.records));
        });
    add("POST", "/bases/{base}/tables/{table}/records", "Insert a record", [](Context& c) {
      auto body = parse_body(c.request);
      auto result = c.service.insert_record(c.actor, c.params["base"], c.params["table"], values_member(body, "cells"));
      return json_response(201, record_view_json(result.table, result.record));
    });
    add("GET", "/bases/{base}/tables/{table}/records/{record}", "Fetch a record", [](Context& c) {
      auto result = c.service.get_record(c.actor, c.params["base"], c.params["table"], RecordId(c.params["record"]));
      return json_response(200, record_view_json(result.table, result.record));
    });
    add("PATCH", "/bases/{base}/tables/{table}/records/{record}", "Update cells of a record", [](Context& c) {
      auto body = parse_body(c.request);
      auto result = c.service.update_record(c.actor, c.params["base"], c.params["table"],
                                            RecordId(c.params["record"]), values_member(body, "cells"));
      return json_response(200, record_view_json(result.table, result.record));
    });
    add("DELETE", "/bases/{base}/tables/{table}/records/{record}", "Delete a record", [](Context& c) {
      c.service.delete_record(c.actor, c.params["base"], c.params["table"], RecordId(c.params["record"]));
      return Response{204, "application/json", "", {}};
    });
    add("GET", "/bases/{base}/tables/{table}/records/{record}/comments", "List comments on a record",
        [](Context& c) {
          Json list = Json::array();
          for (const auto& comment : c.service.list_comments(c.actor, c.params["base"], c.params["table"],
                                                             RecordId(c.params["record"]))) {
            list.push_back(to_json(comment));
          }
          return json_response(200, Json{{"comments", std::move(list)}});
        });
    add("POST", "/bases/{base}/tables/{table}/records/{record}/comments", "Comment on a record", [](Context& c) {
      auto body = parse_body(c.request);
      return json_response(201, to_json(c.service.add_comment(c.actor, c.params["base"], c.params["table"],
                                                              RecordId(c.params["record"]),
                                                              string_member(body, "text"))));
    });
    add("GET", "/bases/{base}/tables/{table}/export.csv", "Export the table as tidy CSV", [](Context& c) {
      auto config = export_config(c.request);
      return Response{200, "text/csv; charset=utf-8",
                      c.service.export_csv(c.actor, c.params["base"], c.params["table"], config), {}};
    });
    add("POST", "/bases/{base}/tables/{table}/import", "Import CSV rows (mode=strict|lenient)", [](Context& c) {
      auto mode_text = query_param(c.request, "mode").value_or("strict");
      ImportMode mode;
      if (mode_text == "strict") {
        mode = ImportMode::strict;
      } else if (mode_text == "lenient") {
        mode = ImportMode::lenient;
      } else {
        throw Error(ErrorCode::invalid_request, "mode must be strict or lenient", "mode");
      }
      auto joiner = query_param(c.request, "joiner").value_or("; ");
      auto result = c.service.import_csv(c.actor, c.params["base"], c.params["table"], c.request.body, mode, joiner);
      return json_response(result.errors.empty() ? 201 : 422,
                           Json{{"inserted", result.inserted}, {"errors", import_errors(result.errors)}});
    });
    add("POST", "/bases/{base}/grants", "Grant a role to a principal", [](Context& c) {
      auto body = parse_body(c.request);
      auto principal = PrincipalId(string_member(body, "principal"));
      auto role = parse_role(string_member(body, "role"));
      if (!role) throw Error(ErrorCode::invalid_request, "unknown role", "role");
      c.service.set_grant(c.actor, c.params["base"], principal, *role);
      return json_response(201, to_json(Grant{principal, *role}));
    });
    add("DELETE", "/bases/{base}/grants/{principal}", "Revoke a principal's grant", [](Context& c) {
      c.service.revoke_grant(c.actor, c.params["base"], PrincipalId(c.params["principal"]));
      return Response{204, "application/json", "", {}};
    });
    add("GET", "/bases/{base}/presets/undelivered-balance", "Contract balances for marketing bases",
        [](Context& c) {
          Json list = Json::array();
          for (const auto& row : c.service.undelivered_balances(c.actor, c.params["base"])) {
            list.push_back(Json{{"contract", row.contract.str()},
                                {"name", row.name},
                                {"contracted", row.contracted},
                                {"delivered", row.delivered},
                                {"balance", row.balance()}});
          }
          return json_response(200, Json{{"balances", std::move(list)}});
        });
    add("GET", "/forms/{form}", "Render a form; query parameters are draft answers", [](Context& c) {
      FormId form(c.params["form"]);
      return json_response(200, to_json(c.service.render_form(c.actor, form, query_values(c.request))));
    }, true);
    add("POST", "/forms/{form}/submissions", "Submit a form (Idempotency-Key header supported)", [](Context& c) {
      auto body = parse_body(c.request);
      return submit_response(c.service.submit(c.actor, FormId(c.params["form"]), values_member(body, "answers"),
                                              new_options(body), idempotency_key(c.request)));
    }, true);
    add("POST", "/forms/{form}/tokens", "Mint a form token", [](Context& c) {
      return json_response(201, to_json(c.service.mint_form_token(c.actor, FormId(c.params["form"]))));
    });
    add("GET", "/forms/{form}/tokens", "List a form's tokens", [](Context& c) {
      Json list = Json::array();
      for (const auto& token : c.service.list_form_tokens(c.actor, FormId(c.params["form"]))) {
        list.push_back(to_json(token));
      }
      return json_response(200, Json{{"tokens", std::move(list)}});
    });
    add("DELETE", "/forms/{form}/tokens/{token}", "Revoke a form token", [](Context& c) {
      c.service.revoke_form_token(c.actor, FormId(c.params["form"]), c.params["token"]);
      return Response{204, "application/json", "", {}};
    });
    add("GET", "/f/{token}", "Render the form behind a share link", [](Context& c) {
      auto form = c.service.token_form(c.params["token"]);
      return json_response(200, to_json(c.service.render_form(c.actor, form, query_values(c.request))));
    }, true);
    add("POST", "/f/{token}/submissions", "Submit through a share link", [](Context& c) {
      auto body = parse_body(c.request);
      auto form = c.service.token_form(c.params["token"]);
      return submit_response(c.service.submit(c.actor, form, values_member(body, "answers"), new_options(body),
                                              idempotency_key(c.request)));
    }, true);
    add("GET", "/templates", "List base templates", [](Context& c) {
      Json list = Json::array();
      for (const auto& t : c.service.templates(c.actor)) list.push_back(template_json(t));
      return json_response(200, Json{{"templates", std::move(list)}});
    });
    return r;
  }();
  return table;
}

Response error_response(const Error& error) { return json_response(http_status(error.code()), error_body(error)); }

}  // namespace

std::string Request::header(const std::string& name) const {
  auto it = headers.find(lower(name));
  return it == headers.end() ? std::string() : it->second;
}

const std::vector<RouteInfo>& routes() {
  static const std::vector<RouteInfo> infos = [] {
    std::vector<RouteInfo> out;
    for (const auto& route : route_table()) out.push_back(route.info);
    return out;
  }();
  return infos;
}

Json error_body(const Error& error) {
  Json body{{"status", http_status(error.code())},
            {"code", std::string(to_string(error.code()))},
            {"message", error.what()}};
  if (!error.field().empty()) body["field"] = error.field();
  Json details = Json::array();
  for (const auto& issue : error.issues()) {
    Json item{{"code", std::string(to_string(issue.code))}, {"message", issue.message}};
    if (!issue.field.empty()) item["field"] = issue.field;
    details.push_back(std::move(item));
  }
  body["details"] = std::move(details);
  return body;
}

Response dispatch(Service& service, const Request& request) {
  auto path = segments(request.path);
  const Route* found = nullptr;
  std::optional<Params> params;
  bool path_known = false;
  for (const auto& route : route_table()) {
    auto m = match(route.info.pattern, path);
    if (!m) continue;
    path_known = true;
    if (route.info.method != request.method) continue;
    found = &route;
    params = std::move(m);
    break;
  }
  if (!found) {
    int status = path_known ? 405 : 404;
    return json_response(status, Json{{"status", status},
                                      {"code", "invalid-request"},
                                      {"message", path_known ? "method not allowed" : "no such route"},
                                      {"details", Json::array()}});
  }

  try {
    // Authentication happens before any lookup so that credentials are
    // checked first on every route; authorization is the service's job.
    std::string bearer;
    if (path.size() >= 2 && path[0] == "f") {
      bearer = (*params)["token"];
    } else {
      auto header = request.header("authorization");
      if (header.size() > 7 && lower(header.substr(0, 7)) == "bearer ") bearer = trim(header.substr(7));
    }
    Context context{service, request, std::move(*params), service.authenticate(bearer)};
    return found->handler(context);
  } catch (const Error& error) {
    return error_response(error);
  } catch (const nlohmann::json::exception& e) {
    return error_response(Error(ErrorCode::invalid_request, std::string("malformed request: ") + e.what()));
  } catch (const std::exception& e) {
    return error_response(Error(ErrorCode::io_failure, e.what()));
  }
}

Json openapi_document() {
  Json paths = Json::object();
  for (const auto& route : routes()) {
    Json parameters = Json::array();
    for (const auto& part : segments(route.pattern)) {
      if (part.front() != '{') continue;
      parameters.push_back(Json{{"name", part.substr(1, part.size() - 2)},
                                {"in", "path"},
                                {"required", true},
                                {"schema", Json{{"type", "string"}}}});
    }
    Json security = Json::array({Json{{"bearer", Json::array()}}});
    Json responses{{"default", Json{{"description", "ApiError"},
                                    {"content", Json{{"application/json",
                                                      Json{{"schema", Json{{"$ref", "#/components/schemas/ApiError"}}}}}}}}}};
    if (route.pattern.ends_with("export.csv")) {
      responses["200"] = Json{{"description", "CSV"}, {"content", Json{{"text/csv; charset=utf-8", Json::object()}}}};
    } else {
      responses["2XX"] = Json{{"description", "Success"}};
    }
    Json operation{{"summary", route.summary},
                   {"parameters", std::move(parameters)},
                   {"security", std::move(security)},
                   {"responses", std::move(responses)}};
    if (route.accepts_form_token) operation["x-accepts-form-token"] = true;
    paths[route.pattern][lower(route.method)] = std::move(operation);
  }
  Json api_error{{"type", "object"},
                 {"required", Json::array({"status", "code", "message", "details"})},
                 {"properties", Json{{"status", Json{{"type", "integer"}}},
                                     {"code", Json{{"type", "string"}}},
                                     {"message", Json{{"type", "string"}}},
                                     {"field", Json{{"type", "string"}}},
                                     {"details", Json{{"type", "array"}}}}}};
  return Json{{"openapi", "3.0.3"},
              {"info", Json{{"title", "farmrec"}, {"version", "0.1.0"}}},
              {"paths", std::move(paths)},
              {"components", Json{{"securitySchemes", Json{{"bearer", Json{{"type", "http"}, {"scheme", "bearer"}}}}},
                                  {"schemas", Json{{"ApiError", std::move(api_error)}}}}}};
}

struct Server::Impl {
  Service& service;
  httplib::Server server;

  explicit Impl(Service& s) : service(s) {
    auto handle = [this](const httplib::Request& in, httplib::Response& out) {
      Request request;
      request.method = in.method;
      request.path = in.path;
      for (const auto& [key, value] : in.params) request.query.emplace(key, value);
      for (const auto& [key, value] : in.headers) request.headers.emplace(lower(key), value);
      request.body = in.body;
      auto response = dispatch(service, request);
      out.status = response.status;
      for (const auto& [key, value] : response.headers) out.set_header(key, value);
      if (!response.body.empty() || response.status != 204) out.set_content(response.body, response.content_type);
    };
    server.Get(".*", handle);
    server.Post(".*", handle);
    server.Patch(".*", handle);
    server.Delete(".*", handle);
    server.Put(".*", handle);
  }
};

Server::Server(Service& service) : impl_(std::make_unique<Impl>(service)) {}
Server::~Server() = default;

int Server::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Server::run() { return impl_->server.listen_after_bind(); }

void Server::stop() { impl_->server.stop(); }

}  // namespace farmrec::http
