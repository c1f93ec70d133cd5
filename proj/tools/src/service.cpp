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

#include "service.hpp"

#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <functional>
#include <future>
#include <map>
#include <mutex>
#include <regex>
#include <vector>

#include "pipeline.hpp"
#include "timt/error.hpp"
#include "timt/io/binary.hpp"
#include "timt/io/dataset.hpp"
#include "timt/io/documents.hpp"
#include "timt/io/fixtures.hpp"

namespace timt::service {

using nlohmann::json;
using tools::Measure;

namespace {

class HttpError : public std::runtime_error {
 public:
  HttpError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status(status), code(std::move(code)) {}
  int status;
  std::string code;
};

[[noreturn]] void http_fail(int status, const std::string& code, const std::string& message) {
  throw HttpError(status, code, message);
}

int status_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::not_found: return 404;
    case ErrorCode::grid_mismatch:
    case ErrorCode::dimension_mismatch:
    case ErrorCode::size_mismatch: return 409;
    case ErrorCode::io: return 500;
    default: return 422;
  }
}

std::string digest(const std::string& s) {
  return io::fnv1a64({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()}).substr(8);
}

/// Compute-once map: concurrent callers with the same key share one computation.
template <class T>
class Memo {
 public:
  std::shared_ptr<const T> get(const std::string& key, const std::function<T()>& compute) {
    std::shared_future<std::shared_ptr<const T>> f;
    std::promise<std::shared_ptr<const T>> p;
    bool owner = false;
    {
      std::lock_guard lock(mu_);
      auto it = entries_.find(key);
      if (it == entries_.end()) {
        f = p.get_future().share();
        entries_.emplace(key, f);
        owner = true;
      } else {
        f = it->second;
      }
    }
    if (owner) {
      try {
        p.set_value(std::make_shared<const T>(compute()));
      } catch (...) {
        {
          std::lock_guard lock(mu_);
          entries_.erase(key);
        }
        p.set_exception(std::current_exception());
      }
    }
    return f.get();
  }

  std::shared_ptr<const T> find(const std::string& key) const {
    std::shared_future<std::shared_ptr<const T>> f;
    {
      std::lock_guard lock(mu_);
      auto it = entries_.find(key);
      if (it == entries_.end()) return nullptr;
      f = it->second;
    }
    return f.get();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_future<std::shared_ptr<const T>>> entries_;
};

struct Job {
  std::string id;
  std::string kind;
  std::shared_future<json> result;
  std::atomic<bool> done{false};
};

struct TraitVersion {
  TraitExpr expr;
  std::string document;
};

struct StoredSegmentation {
  Segmentation seg;
  std::string trait;
  int version = 0;
  Measure measure = Measure::distance;
};

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes"; }

double parse_double(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  http_fail(422, "invalid_argument", what + ": expected a number, got '" + text + "'");
}

std::int64_t parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  http_fail(422, "invalid_argument", what + ": expected an integer, got '" + text + "'");
}

std::string param(const httplib::Request& req, const std::string& key, const std::string& fallback = {}) {
  return req.has_param(key) ? req.get_param_value(key) : fallback;
}

std::string required_param(const httplib::Request& req, const std::string& key) {
  if (!req.has_param(key)) http_fail(422, "invalid_argument", "missing query parameter '" + key + "'");
  return req.get_param_value(key);
}

Measure measure_param(const std::string& text) {
  const auto m = tools::parse_measure(text);
  if (!m) http_fail(422, "invalid_argument", "measure must be 'distance' or 'similarity'");
  return *m;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size() && !s.empty()) {
    const std::size_t comma = s.find(',', start);
    out.push_back(s.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

}  // namespace

struct Service::Impl {
  const std::shared_ptr<const MultiField> dataset;
  ServiceOptions options;
  httplib::Server server;

  std::mutex traits_mu;
  std::map<std::string, std::vector<TraitVersion>> traits;

  Memo<ScalarField> fields;
  Memo<MergeTree> trees;
  Memo<json> tree_docs;
  Memo<StoredSegmentation> segmentations;
  Memo<json> suggestions;

  std::mutex jobs_mu;
  std::map<std::string, std::shared_ptr<Job>> jobs;

  Impl(MultiField mf, ServiceOptions opts)
      : dataset(std::make_shared<const MultiField>(std::move(mf))), options(std::move(opts)) {
    routes();
  }

  ~Impl() {
    std::vector<std::shared_ptr<Job>> pending;
    {
      std::lock_guard lock(jobs_mu);
      for (auto& [id, job] : jobs) pending.push_back(job);
    }
    for (auto& j : pending) j->result.wait();
  }

  // Trait references are "name" (latest version) or "name@version".
  std::pair<std::string, TraitVersion> resolve(const std::string& ref, int* version_out = nullptr) {
    std::string name = ref;
    std::optional<std::int64_t> version;
    if (const auto at = ref.find('@'); at != std::string::npos) {
      name = ref.substr(0, at);
      version = parse_int(ref.substr(at + 1), "trait version");
    }
    std::lock_guard lock(traits_mu);
    auto it = traits.find(name);
    if (it == traits.end()) http_fail(404, "not_found", "unknown trait '" + name + "'");
    const auto& versions = it->second;
    const std::int64_t v = version.value_or(static_cast<std::int64_t>(versions.size()));
    if (v < 1 || v > static_cast<std::int64_t>(versions.size()))
      http_fail(404, "not_found", "trait '" + name + "' has no version " + std::to_string(v));
    if (version_out) *version_out = static_cast<int>(v);
    return {name, versions[static_cast<std::size_t>(v - 1)]};
  }

  std::string field_key(const TraitVersion& t, Measure m) const {
    return digest(t.document) + "-" + std::string(tools::to_string(m));
  }

  std::shared_ptr<const ScalarField> field_for(const TraitVersion& t, Measure m) {
    return fields.get(field_key(t, m), [&] { return tools::trait_field(t.expr, *dataset, m); });
  }

  std::shared_ptr<Job> submit(const std::string& key, const std::string& kind, std::function<json()> work) {
    std::lock_guard lock(jobs_mu);
    const std::string id = "job-" + digest(kind + "|" + key);
    if (auto it = jobs.find(id); it != jobs.end()) return it->second;
    auto job = std::make_shared<Job>();
    job->id = id;
    job->kind = kind;
    std::weak_ptr<Job> weak = job;
    job->result = std::async(std::launch::async, [work = std::move(work), weak]() -> json {
                    struct MarkDone {
                      std::weak_ptr<Job> j;
                      ~MarkDone() {
                        if (auto p = j.lock()) p->done = true;
                      }
                    } mark{weak};
                    return work();
                  }).share();
    jobs.emplace(id, job);
    return job;
  }

  json job_status(const Job& job) {
    json j = {{"job", job.id}, {"kind", job.kind}};
    if (!job.done) {
      j["status"] = "running";
      return j;
    }
    try {
      j["result"] = job.result.get();
      j["status"] = "done";
    } catch (const Error& e) {
      j["status"] = "failed";
      j["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    } catch (const std::exception& e) {
      j["status"] = "failed";
      j["error"] = {{"code", "internal"}, {"message", e.what()}};
    }
    return j;
  }

  static void send(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  void handle(const httplib::Request& req, httplib::Response& res,
              const std::function<void(const httplib::Request&, httplib::Response&)>& fn) {
    try {
      fn(req, res);
    } catch (const HttpError& e) {
      send(res, e.status, {{"error", {{"code", e.code}, {"message", e.what()}}}});
    } catch (const Error& e) {
      send(res, status_for(e.code()), {{"error", {{"code", std::string(to_string(e.code()))}, {"message", e.what()}}}});
    } catch (const json::exception& e) {
      send(res, 422, {{"error", {{"code", "parse"}, {"message", e.what()}}}});
    } catch (const std::exception& e) {
      send(res, 500, {{"error", {{"code", "internal"}, {"message", e.what()}}}});
    }
  }

  template <class F>
  auto wrap(F fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) { handle(req, res, fn); };
  }

  json dataset_document(const httplib::Request& req) {
    const MultiField& mf = *dataset;
    json channels = json::array();
    for (const auto& c : mf.channels())
      channels.push_back({{"name", c.name}, {"unit", c.unit}, {"provenance", io::provenance_to_json(c.provenance)}});
    const auto attrs = io::attribute_channels(mf);
    const std::string x = param(req, "x", attrs.empty() ? mf.channel(0).name : attrs[0]);
    const std::string y = param(req, "y", attrs.size() > 1 ? attrs[1] : x);
    for (const auto& c : {x, y})
      if (!mf.find(c)) http_fail(404, "not_found", "unknown channel '" + c + "'");
    const int bins = static_cast<int>(parse_int(param(req, "bins", std::to_string(options.density_bins)), "bins"));
    return {{"name", options.dataset_name},
            {"manifest", {{"format_version", io::kFormatVersion},
                          {"grid", io::grid_to_json(mf.grid())},
                          {"vertex_count", mf.vertex_count()},
                          {"channels", channels},
                          {"attribute_channels", attrs}}},
            {"stats", tools::channel_stats(mf)},
            {"density", tools::density_scatterplot(mf, x, y, bins)}};
  }

  void put_trait(const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    TraitExpr expr;
    try {
      expr = io::parse_trait_document(req.body);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::dimension_mismatch) throw;
      http_fail(422, "parse", e.what());
    }
    validate(expr, dataset.get());
    const std::string doc = io::canonical_trait_document(expr);
    std::lock_guard lock(traits_mu);
    auto& versions = traits[name];
    int status = 200;
    if (versions.empty() || versions.back().document != doc) {
      versions.push_back({std::move(expr), doc});
      status = 201;
    }
    send(res, status, {{"name", name}, {"version", versions.size()}, {"key", digest(doc)},
                       {"document", json::parse(doc)}});
  }

  void get_trait(const httplib::Request& req, httplib::Response& res) {
    std::string ref = req.matches[1];
    if (req.has_param("version")) ref += "@" + req.get_param_value("version");
    int version = 0;
    const auto [name, t] = resolve(ref, &version);
    res.set_header("X-Trait-Version", std::to_string(version));
    res.set_content(t.document, "application/json");
  }

  json list_traits() {
    std::lock_guard lock(traits_mu);
    json out = json::array();
    for (const auto& [name, versions] : traits)
      out.push_back({{"name", name}, {"versions", versions.size()}, {"key", digest(versions.back().document)}});
    return out;
  }

  json field_slice(const httplib::Request& req) {
    int version = 0;
    const auto [name, t] = resolve(req.matches[1], &version);
    const Measure m = measure_param(param(req, "measure", "distance"));
    const auto field = field_for(t, m);
    const std::string axis = param(req, "axis", "z");
    const auto slice = tools::slice_vertices(field->grid, axis, parse_int(required_param(req, "index"), "index"));
    std::vector<double> values;
    values.reserve(slice.vertices.size());
    for (VertexId v : slice.vertices) values.push_back(field->values[static_cast<std::size_t>(v)]);
    return {{"trait", name},      {"version", version},
            {"measure", std::string(tools::to_string(m))},
            {"meaning", std::string(to_string(field->meaning))},
            {"axis", axis},       {"index", parse_int(required_param(req, "index"), "index")},
            {"width", slice.width}, {"height", slice.height},
            {"dtype", "f64"},     {"order", "row-major, first in-plane axis fastest"},
            {"values", values}};
  }

  std::shared_ptr<const MergeTree> tree_for(const TraitVersion& t, Measure m, const tools::TreeOptions& opts,
                                            const std::string& key) {
    return trees.get(key, [&] { return tools::build_tree(*field_for(t, m), opts); });
  }

  json tree_document(const httplib::Request& req) {
    int version = 0;
    const auto [name, t] = resolve(req.matches[1], &version);
    const Measure m = measure_param(param(req, "measure", "distance"));
    tools::TreeOptions opts;
    opts.superlevel = truthy(param(req, "superlevel", "false"));
    if (req.has_param("simplify")) {
      const auto metric = parse_simplify_metric(param(req, "metric", "persistence"));
      if (!metric) http_fail(422, "invalid_argument", "metric must be 'persistence' or 'hypervolume'");
      opts.simplify_metric = metric;
      opts.simplify_threshold = parse_double(req.get_param_value("simplify"), "simplify");
    }
    const std::string key = field_key(t, m) + "|" + tools::simplification_json(opts).dump() + "|" +
                            (opts.superlevel ? "super" : "sub");
    auto work = [this, t = t, m, opts, key, name = name, version] {
      const auto tree = tree_for(t, m, opts, key);
      return *tree_docs.get(key, [&] {
        json j = io::tree_to_json(*tree);
        j["simplification"] = tools::simplification_json(opts);
        j["trait"] = name;
        j["version"] = version;
        return j;
      });
    };
    if (truthy(param(req, "async", "false"))) {
      const auto job = submit(key, "tree", work);
      return job_status(*job);
    }
    return work();
  }

  json post_query(const httplib::Request& req, int& status) {
    json body;
    try {
      body = json::parse(req.body);
    } catch (const json::parse_error& e) {
      http_fail(422, "parse", std::string("request body: ") + e.what());
    }
    if (!body.is_object()) http_fail(422, "parse", "$: expected an object");
    for (const auto& [k, v] : body.items())
      if (k != "trait" && k != "spec" && k != "measure")
        http_fail(422, "parse", "$." + k + ": unknown field");
    if (!body.contains("trait") || !body["trait"].is_string()) http_fail(422, "parse", "$.trait: expected a string");
    if (!body.contains("spec")) http_fail(422, "parse", "$.spec: missing field");
    QuerySpec spec;
    try {
      spec = io::query_spec_from_json(body["spec"]);
    } catch (const Error& e) {
      std::string msg = e.what();
      if (msg.rfind("$", 0) == 0) msg = "$.spec" + msg.substr(1);
      http_fail(422, "parse", msg);
    }
    const Measure m = measure_param(body.value("measure", "distance"));
    int version = 0;
    const auto [name, t] = resolve(body["trait"].get<std::string>(), &version);
    const std::string id = "seg-" + digest(field_key(t, m) + "|" + io::query_spec_to_json(spec).dump());
    bool fresh = false;
    const auto stored = segmentations.get(id, [&] {
      fresh = true;
      return StoredSegmentation{tools::segment_field(*field_for(t, m), spec), name, version, m};
    });
    status = fresh ? 201 : 200;
    return {{"id", id},
            {"trait", stored->trait},
            {"version", stored->version},
            {"segments", stored->seg.segments.size()},
            {"query", io::query_spec_to_json(stored->seg.spec)}};
  }

  std::shared_ptr<const StoredSegmentation> segmentation(const std::string& id) {
    auto s = segmentations.find(id);
    if (!s) http_fail(404, "not_found", "unknown segmentation '" + id + "'");
    return s;
  }

  json segment_document(const std::string& id) {
    const auto s = segmentation(id);
    json j = io::segmentation_to_json(s->seg);
    j["id"] = id;
    j["trait"] = s->trait;
    j["version"] = s->version;
    j["measure"] = std::string(tools::to_string(s->measure));
    return j;
  }

  json segment_slice(const httplib::Request& req) {
    const auto s = segmentation(req.matches[1]);
    const std::string axis = param(req, "axis", "z");
    const std::int64_t index = parse_int(required_param(req, "index"), "index");
    const auto slice = tools::slice_vertices(s->seg.grid, axis, index);
    std::vector<std::int32_t> labels;
    labels.reserve(slice.vertices.size());
    for (VertexId v : slice.vertices) labels.push_back(s->seg.labels[static_cast<std::size_t>(v)]);
    return {{"id", std::string(req.matches[1])},
            {"axis", axis},
            {"index", index},
            {"width", slice.width},
            {"height", slice.height},
            {"dtype", "i32"},
            {"order", "row-major, first in-plane axis fastest"},
            {"background_label", kBackground},
            {"labels", labels}};
  }

  void dictionary_suggestions(const httplib::Request& req, httplib::Response& res) {
    const bool train = req.has_param("atoms") || req.has_param("sparsity") || req.has_param("iterations") ||
                       req.has_param("seed") || req.has_param("channels") || !options.dictionary;
    tools::LearnOptions learn;
    std::string key = "preloaded";
    if (train) {
      learn.channels = split_list(param(req, "channels"));
      for (const auto& c : learn.channels)
        if (!dataset->find(c)) http_fail(404, "not_found", "unknown channel '" + c + "'");
      learn.ksvd.atoms = static_cast<std::size_t>(parse_int(param(req, "atoms", "0"), "atoms"));
      learn.ksvd.sparsity = static_cast<int>(parse_int(param(req, "sparsity", "1"), "sparsity"));
      learn.ksvd.iterations = static_cast<int>(parse_int(param(req, "iterations", "30"), "iterations"));
      learn.ksvd.seed = static_cast<std::uint64_t>(parse_int(param(req, "seed", "0"), "seed"));
      key = json{{"channels", learn.channels},
                 {"atoms", learn.ksvd.atoms},
                 {"sparsity", learn.ksvd.sparsity},
                 {"iterations", learn.ksvd.iterations},
                 {"seed", learn.ksvd.seed}}
                .dump();
    }
    auto work = [this, train, learn, key] {
      return *suggestions.get(key, [&] {
        if (train) {
          const auto d = tools::learn_dictionary(*dataset, learn);
          return json{{"dictionary", {{"atoms", d.dictionary.atom_count()},
                                      {"sparsity", d.dictionary.meta.sparsity},
                                      {"iterations", d.dictionary.meta.iterations},
                                      {"final_rmse", d.dictionary.meta.final_rmse},
                                      {"channels", d.dictionary.channels}}},
                      {"suggestions", io::suggestions_to_json(suggest_atom_traits(d.dictionary, d.codes, d.space))}};
        }
        const Dictionary& d = *options.dictionary;
        const MultiField space = assemble_attribute_space(*dataset, d.channels);
        SparseCodes codes;
        if (options.codes) {
          codes = *options.codes;
        } else {
          const Eigen::MatrixXd x = attribute_matrix(space);
          codes.atom_count = d.atom_count();
          for (Eigen::Index c = 0; c < x.cols(); ++c)
            codes.columns.push_back(omp_sparse_code(d.atoms, x.col(c), d.meta.sparsity).code);
        }
        return json{{"dictionary", {{"atoms", d.atom_count()}, {"sparsity", d.meta.sparsity}, {"channels", d.channels}}},
                    {"suggestions", io::suggestions_to_json(suggest_atom_traits(d, codes, space))}};
      });
    };
    const auto job = submit(key, "dictionary", work);
    if (truthy(param(req, "wait", "false"))) job->result.wait();
    const json status = job_status(*job);
    if (status["status"] == "done") {
      send(res, 200, status["result"]);
    } else if (status["status"] == "failed") {
      send(res, 422, {{"error", status["error"]}, {"job", job->id}});
    } else {
      send(res, 202, status);
    }
  }

  void routes() {
    auto& s = server;
    s.set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Origin", options.allow_origin);
    });
    s.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });
    if (options.static_dir) s.set_mount_point("/ui", options.static_dir->string());

    s.Get("/health", wrap([](const auto&, auto& res) { send(res, 200, {{"status", "ok"}}); }));
    s.Get("/dataset", wrap([this](const auto& req, auto& res) { send(res, 200, dataset_document(req)); }));
    s.Get("/traits", wrap([this](const auto&, auto& res) { send(res, 200, list_traits()); }));
    s.Put(R"(/traits/([A-Za-z0-9_.\-]+))", wrap([this](const auto& req, auto& res) { put_trait(req, res); }));
    s.Get(R"(/traits/([A-Za-z0-9_.\-]+(?:@[0-9]+)?))", wrap([this](const auto& req, auto& res) { get_trait(req, res); }));
    s.Get(R"(/fields/([^/]+)/slice)", wrap([this](const auto& req, auto& res) { send(res, 200, field_slice(req)); }));
    s.Get(R"(/tree/([^/]+))", wrap([this](const auto& req, auto& res) {
            const json j = tree_document(req);
            send(res, j.contains("job") && j["status"] != "done" ? 202 : 200, j);
          }));
    s.Post("/query", wrap([this](const auto& req, auto& res) {
             int status = 200;
             const json j = post_query(req, status);
             send(res, status, j);
           }));
    s.Get(R"(/segments/([^/]+)/slice)", wrap([this](const auto& req, auto& res) { send(res, 200, segment_slice(req)); }));
    s.Get(R"(/segments/([^/]+))", wrap([this](const auto& req, auto& res) { send(res, 200, segment_document(req.matches[1])); }));
    s.Get("/dictionary/suggestions", wrap([this](const auto& req, auto& res) { dictionary_suggestions(req, res); }));
    s.Get(R"(/jobs/([^/]+))", wrap([this](const auto& req, auto& res) {
            std::shared_ptr<Job> job;
            {
              std::lock_guard lock(jobs_mu);
              auto it = jobs.find(req.matches[1]);
              if (it != jobs.end()) job = it->second;
            }
            if (!job) http_fail(404, "not_found", "unknown job '" + std::string(req.matches[1]) + "'");
            if (truthy(param(req, "wait", "false"))) job->result.wait();
            send(res, 200, job_status(*job));
          }));
    s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
      if (res.body.empty() && res.status == 404)
        send(res, 404, {{"error", {{"code", "not_found"}, {"message", "no route for " + req.method + " " + req.path}}}});
    });
  }
};

Service::Service(MultiField dataset, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(dataset), std::move(options))) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::run() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

std::pair<std::string, int> bind_address_from_env() {
  std::string host = "127.0.0.1";
  int port = 8765;
  if (const char* bind = std::getenv("TIMT_BIND"); bind && *bind) {
    const std::string b = bind;
    const auto colon = b.rfind(':');
    if (colon == std::string::npos) {
      host = b;
    } else {
      if (colon > 0) host = b.substr(0, colon);
      port = std::stoi(b.substr(colon + 1));
    }
  } else if (const char* p = std::getenv("TIMT_PORT"); p && *p) {
    port = std::stoi(p);
  }
  return {host, port};
}

}  // namespace timt::service
