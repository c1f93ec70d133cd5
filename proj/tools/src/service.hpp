// Copyright 2026 The TIMT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "timt/dictionary.hpp"
#include "timt/multifield.hpp"

namespace timt::service {

struct ServiceOptions {
  std::string dataset_name = "dataset";
  int density_bins = 128;
  /// Value of Access-Control-Allow-Origin. The bundled UI is served from the
  /// same origin, so this only matters during UI development.
  std::string allow_origin = "*";
  std::optional<std::filesystem::path> static_dir;
  /// Served by /dictionary/suggestions when the request names no training parameters.
  std::optional<Dictionary> dictionary;
  std::optional<SparseCodes> codes;
};

/// HTTP front end over one immutable dataset snapshot.
class Service {
 public:
  Service(MultiField dataset, ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the socket; port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); returns false when the socket failed.
  bool run();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Host and port from TIMT_BIND ("host:port") or TIMT_PORT, else 127.0.0.1:8765.
std::pair<std::string, int> bind_address_from_env();

}  // namespace timt::service
