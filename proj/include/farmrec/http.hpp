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

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "farmrec/service.hpp"

namespace farmrec::http {

// Transport-independent request and response, so routing is testable
// without sockets and the socket server stays a thin adapter.
struct Request {
  std::string method;
  std::string path;
  std::multimap<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;

  std::string header(const std::string& name) const;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
  std::map<std::string, std::string> headers;
};

struct RouteInfo {
  std::string method;
  std::string pattern;  // e.g. /bases/{base}/tables/{table}/records
  std::string summary;
  bool accepts_form_token = false;
};

const std::vector<RouteInfo>& routes();

// ApiError body for an error: {status, code, message, field?, details[]}.
Json error_body(const Error& error);

Response dispatch(Service& service, const Request& request);

// OpenAPI 3.0 description generated from the route table.
Json openapi_document();

class Server {
 public:
  explicit Server(Service& service);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds host:port (port 0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace farmrec::http
