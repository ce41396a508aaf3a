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

// farmrec: administrative command line for a farm records data directory.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

#include "farmrec/demo.hpp"
#include "farmrec/http.hpp"

using namespace farmrec;

namespace {

struct Globals {
  std::string data_dir = "farmrec-data";
  std::string as = "admin";
  bool json = false;
};

Service open_service(const Globals& g, std::shared_ptr<Clock> clock = nullptr) {
  ServiceOptions options;
  options.data_dir = g.data_dir;
  options.clock = std::move(clock);
  return Service(std::move(options));
}

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream buffer;
    buffer << std::cin.rdbuf();
    return buffer.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& path, const std::string& bytes) {
  if (path.empty() || path == "-") {
    std::cout << bytes;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << bytes;
  out.flush();
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path);
}

// With a single table the --table flag may be omitted.
std::string default_table(Service& service, const Actor& actor, const std::string& base, const std::string& table) {
  if (!table.empty()) return table;
  auto document = service.get_base(actor, base);
  if (document.at("tables").size() != 1) {
    throw Error(ErrorCode::invalid_request, "base has several tables; pass --table", "table");
  }
  return document.at("tables").front().at("id").get<std::string>();
}

http::Server* running_server = nullptr;

void on_signal(int) {
  if (running_server) running_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Farm activity records: serve, templates, import and export"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--data-dir", g.data_dir, "Data directory")->envname("FARMREC_DATA_DIR");
  app.add_option("--as", g.as, "Principal to act as for in-process commands");
  app.add_flag("--json", g.json, "Print JSON results");

  auto* serve = app.add_subcommand("serve", "Run the HTTP API");
  std::string listen = "127.0.0.1:8080";
  serve->add_option("--listen", listen, "host:port to listen on");

  auto* init = app.add_subcommand("init", "Create a base from a template");
  std::string template_id, base_name = "Farm", owner;
  init->add_option("--template", template_id, "Template id (see `templates`)");
  init->add_option("--name", base_name, "Base name");
  init->add_option("--owner", owner, "Owning principal (defaults to --as)");

  auto* templates_cmd = app.add_subcommand("templates", "List base templates");

  auto* export_cmd = app.add_subcommand("export", "Export a table as CSV");
  std::string base, table, out_path, datetime_format = "iso";
  bool bom = false;
  export_cmd->add_option("--base", base, "Base id or name")->required();
  export_cmd->add_option("--table", table, "Table id or name");
  export_cmd->add_option("--out", out_path, "Output file (default stdout)");
  export_cmd->add_option("--datetime-format", datetime_format, "table1, iso or a strftime-style pattern");
  export_cmd->add_flag("--bom", bom, "Write a UTF-8 byte order mark");

  auto* import_cmd = app.add_subcommand("import", "Import CSV rows into a table");
  std::string in_path, mode = "strict";
  import_cmd->add_option("--base", base, "Base id or name")->required();
  import_cmd->add_option("--table", table, "Table id or name");
  import_cmd->add_option("--in", in_path, "CSV file, or - for stdin")->required();
  import_cmd->add_option("--mode", mode, "strict or lenient")->check(CLI::IsMember({"strict", "lenient"}));

  auto* grant = app.add_subcommand("grant", "Grant a role on a base");
  std::string user, role;
  grant->add_option("--base", base, "Base id or name")->required();
  grant->add_option("--user", user, "Principal")->required();
  grant->add_option("--role", role, "readonly, commenter, editor or owner")->required();

  auto* token = app.add_subcommand("token", "Mint a shareable form token");
  std::string form;
  token->add_option("--form", form, "Form id")->required();

  auto* user_cmd = app.add_subcommand("user", "Register a principal and print its bearer token");
  user_cmd->add_option("--id", user, "Principal id")->required();

  auto* demo = app.add_subcommand("demo", "Submit the seven sample activities with fixed timestamps");
  demo->add_option("--base", base, "Existing horticultural base (default: create one)");
  demo->add_option("--name", base_name, "Name of the base to create when --base is absent");

  auto* openapi = app.add_subcommand("openapi", "Print the OpenAPI document");
  openapi->add_option("--out", out_path, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (openapi->parsed()) {
      write_output(out_path, http::openapi_document().dump(2) + "\n");
      return 0;
    }
    if (templates_cmd->parsed()) {
      for (const auto& t : list_templates()) std::cout << t.id << "\t" << t.title << "\n";
      return 0;
    }

    Actor actor = PrincipalActor{PrincipalId(g.as)};
    if (demo->parsed()) {
      auto clock = std::make_shared<ManualClock>();
      auto service = open_service(g, clock);
      clock->set(demo_rows().front().at);
      if (base.empty()) {
        base = service.create_base(actor, base_name, std::string("hort-activity")).at("id").get<std::string>();
      }
      auto ids = run_demo(service, *clock, actor, base);
      if (g.json) {
        Json list = Json::array();
        for (const auto& id : ids) list.push_back(id.str());
        std::cout << Json{{"base", service.resolve_base(base).str()}, {"records", list}}.dump() << "\n";
      } else {
        std::cout << service.resolve_base(base).str() << "\n";
      }
      return 0;
    }

    auto service = open_service(g);
    for (const auto& warning : service.recovery_warnings()) std::cerr << "warning: " << warning << "\n";

    if (serve->parsed()) {
      auto colon = listen.rfind(':');
      if (colon == std::string::npos) throw Error(ErrorCode::invalid_request, "--listen must be host:port");
      http::Server server(service);
      int port = server.bind(listen.substr(0, colon), std::stoi(listen.substr(colon + 1)));
      if (port < 0) throw Error(ErrorCode::io_failure, "cannot listen on " + listen);
      running_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on " << listen.substr(0, colon) << ":" << port << std::endl;
      server.run();
      running_server = nullptr;
    } else if (init->parsed()) {
      if (!owner.empty()) actor = PrincipalActor{PrincipalId(owner)};
      auto document = service.create_base(actor, base_name, template_id.empty() ? std::nullopt
                                                                                 : std::optional(template_id));
      std::cout << (g.json ? document.dump(2) : document.at("id").get<std::string>()) << "\n";
    } else if (export_cmd->parsed()) {
      ExportConfig config;
      if (datetime_format == "table1" || datetime_format == "iso") {
        config = ExportConfig::preset(datetime_format);
      } else {
        config.datetime_format = datetime_format;
      }
      config.byte_order_mark = bom;
      write_output(out_path, service.export_csv(actor, base, default_table(service, actor, base, table), config));
    } else if (import_cmd->parsed()) {
      auto result = service.import_csv(actor, base, default_table(service, actor, base, table), read_file(in_path),
                                       mode == "strict" ? ImportMode::strict : ImportMode::lenient);
      for (const auto& error : result.errors) {
        std::cerr << "row " << error.row << ": " << to_string(error.code) << ": " << error.message << "\n";
      }
      std::cout << "imported " << result.inserted << " record(s)\n";
      if (!result.errors.empty()) return 1;
    } else if (grant->parsed()) {
      auto parsed = parse_role(role);
      if (!parsed) throw Error(ErrorCode::invalid_request, "unknown role '" + role + "'", "role");
      service.set_grant(actor, base, PrincipalId(user), *parsed);
    } else if (token->parsed()) {
      auto minted = service.mint_form_token(actor, FormId(form));
      std::cout << (g.json ? to_json(minted).dump() : minted.token) << "\n";
    } else if (user_cmd->parsed()) {
      std::cout << service.add_principal(PrincipalId(user)) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    for (const auto& issue : e.issues()) {
      std::cerr << "  " << to_string(issue.code) << (issue.field.empty() ? "" : " [" + issue.field + "]") << ": "
                << issue.message << "\n";
    }
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
