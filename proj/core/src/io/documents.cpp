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

#include "timt/io/documents.hpp"

#include <cmath>
#include <limits>

#include "timt/error.hpp"
#include "timt/io/binary.hpp"
#include "timt/io/dataset.hpp"
#include "timt/version.hpp"

namespace timt::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTraitFormat = "timt-trait";
constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void bad(const std::string& path, const std::string& msg) { fail(ErrorCode::parse, path + ": " + msg); }

const json& member(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) bad(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(path + "." + key, "missing");
  return *it;
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& path) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) bad(path + "." + key, "unknown field");
  }
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) bad(path, "expected a finite number");
  return v;
}

std::vector<std::string> string_array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_string(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<double> number_array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

/// Box bounds: null entries are open sides.
std::vector<double> bound_array(const json& j, double open, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array of numbers or nulls");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(j[i].is_null() ? open : as_number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

json bounds_to_json(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return out;
}

json primitive_to_json(const TraitPrimitive& p) {
  return std::visit(
      [](const auto& q) -> json {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, PointTrait>) {
          return {{"type", "point"}, {"channels", q.channels}, {"coords", q.coords}};
        } else if constexpr (std::is_same_v<T, SegmentTrait>) {
          return {{"type", "segment"}, {"channels", q.channels}, {"a", q.a}, {"b", q.b}};
        } else if constexpr (std::is_same_v<T, BoxTrait>) {
          return {{"type", "box"}, {"channels", q.channels}, {"lo", bounds_to_json(q.lo)}, {"hi", bounds_to_json(q.hi)}};
        } else {
          json verts = json::array();
          for (const auto& v : q.vertices) verts.push_back({v[0], v[1]});
          return {{"type", "polygon"}, {"channels", {q.channels[0], q.channels[1]}}, {"vertices", verts}};
        }
      },
      p);
}

TraitPrimitive primitive_from_json(const json& j, const std::string& path) {
  const std::string type = as_string(member(j, "type", path), path + ".type");
  const auto channels = [&] { return string_array(member(j, "channels", path), path + ".channels"); };
  if (type == "point") {
    reject_unknown(j, {"type", "channels", "coords"}, path);
    return PointTrait{channels(), number_array(member(j, "coords", path), path + ".coords")};
  }
  if (type == "segment") {
    reject_unknown(j, {"type", "channels", "a", "b"}, path);
    return SegmentTrait{channels(), number_array(member(j, "a", path), path + ".a"),
                        number_array(member(j, "b", path), path + ".b")};
  }
  if (type == "box") {
    reject_unknown(j, {"type", "channels", "lo", "hi"}, path);
    return BoxTrait{channels(), bound_array(member(j, "lo", path), -kInf, path + ".lo"),
                    bound_array(member(j, "hi", path), kInf, path + ".hi")};
  }
  if (type == "polygon") {
    reject_unknown(j, {"type", "channels", "vertices"}, path);
    const auto ch = channels();
    if (ch.size() != 2) bad(path + ".channels", "a polygon needs exactly two channels");
    PolygonTrait poly{{ch[0], ch[1]}, {}};
    const json& verts = member(j, "vertices", path);
    if (!verts.is_array()) bad(path + ".vertices", "expected an array of [x, y] pairs");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      const std::string vp = path + ".vertices[" + std::to_string(i) + "]";
      const auto xy = number_array(verts[i], vp);
      if (xy.size() != 2) bad(vp, "expected [x, y]");
      poly.vertices.push_back({xy[0], xy[1]});
    }
    return poly;
  }
  bad(path + ".type", "unknown primitive type '" + type + "'");
}

json node_to_json(const TraitNode& n) {
  if (n.op == TraitOp::leaf) return {{"op", "leaf"}, {"primitive", primitive_to_json(*n.primitive)}};
  json children = json::array();
  for (const auto& c : n.children) children.push_back(node_to_json(c));
  return {{"op", std::string(to_string(n.op))}, {"children", children}};
}

TraitNode node_from_json(const json& j, const std::string& path, int depth) {
  if (depth > 64) bad(path, "expression nested too deeply");
  const std::string op = as_string(member(j, "op", path), path + ".op");
  if (op == "leaf") {
    reject_unknown(j, {"op", "primitive"}, path);
    return TraitNode::leaf(primitive_from_json(member(j, "primitive", path), path + ".primitive"));
  }
  reject_unknown(j, {"op", "children"}, path);
  const json& cj = member(j, "children", path);
  if (!cj.is_array()) bad(path + ".children", "expected an array");
  std::vector<TraitNode> children;
  for (std::size_t i = 0; i < cj.size(); ++i)
    children.push_back(node_from_json(cj[i], path + ".children[" + std::to_string(i) + "]", depth + 1));
  if (op == "not") {
    if (children.size() != 1) bad(path + ".children", "'not' takes exactly one child");
    return TraitNode::complement(std::move(children[0]));
  }
  if (children.empty()) bad(path + ".children", "'" + op + "' needs at least one child");
  if (op == "and") return TraitNode::all_of(std::move(children));
  if (op == "or") return TraitNode::any_of(std::move(children));
  if (op == "product_l2") return TraitNode::product_l2(std::move(children));
  bad(path + ".op", "unknown operator '" + op + "'");
}

json number_or_inf(double v) { return std::isfinite(v) ? json(v) : json("inf"); }

double number_or_inf(const json& j, const std::string& path) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInf;
  return as_number(j, path);
}

}  // namespace

json trait_to_json(const TraitExpr& expr) {
  return {{"format", kTraitFormat},
          {"version", kFormatVersion},
          {"semantics", std::string(to_string(expr.semantics))},
          {"expr", node_to_json(expr.root)}};
}

TraitExpr trait_from_json(const json& j) {
  if (!j.is_object()) bad("$", "expected an object");
  reject_unknown(j, {"format", "version", "semantics", "expr"}, "$");
  if (j.contains("format") && j["format"] != kTraitFormat) bad("$.format", "expected 'timt-trait'");
  if (j.contains("version") && j["version"] != kFormatVersion) bad("$.version", "unknown version");
  TraitExpr expr;
  if (j.contains("semantics")) {
    const std::string s = as_string(j["semantics"], "$.semantics");
    const auto sem = parse_semantics(s);
    if (!sem) bad("$.semantics", "unknown semantics '" + s + "'");
    expr.semantics = *sem;
  }
  expr.root = node_from_json(member(j, "expr", "$"), "$.expr", 0);
  try {
    validate(expr);
  } catch (const Error& e) {
    const ErrorCode code = e.code() == ErrorCode::dimension_mismatch ? e.code() : ErrorCode::parse;
    fail(code, std::string("$.expr: ") + e.what());
  }
  return expr;
}

std::string canonical_trait_document(const TraitExpr& expr) { return trait_to_json(expr).dump(); }

TraitExpr parse_trait_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad("$", std::string("invalid JSON: ") + e.what());
  }
  return trait_from_json(j);
}

TraitExpr read_trait(const fs::path& path) { return parse_trait_document(read_text(path)); }

json query_spec_to_json(const QuerySpec& spec) {
  json j = {{"method", std::string(to_string(spec.method))},
            {"metric", std::string(to_string(spec.metric))},
            {"threshold", number_or_inf(spec.threshold)}};
  j["cut_level"] = spec.cut_level ? number_or_inf(*spec.cut_level) : json(nullptr);
  j["delta"] = spec.delta ? json(*spec.delta) : json(nullptr);
  return j;
}

QuerySpec query_spec_from_json(const json& j) {
  if (!j.is_object()) bad("$", "expected an object");
  reject_unknown(j, {"method", "metric", "threshold", "cut_level", "delta"}, "$");
  QuerySpec spec;
  const std::string method = as_string(member(j, "method", "$"), "$.method");
  const auto m = parse_query_method(method);
  if (!m) bad("$.method", "unknown method '" + method + "'");
  spec.method = *m;
  if (j.contains("metric") && !j["metric"].is_null()) {
    const std::string metric = as_string(j["metric"], "$.metric");
    const auto mm = parse_simplify_metric(metric);
    if (!mm) bad("$.metric", "unknown metric '" + metric + "'");
    spec.metric = *mm;
  }
  if (j.contains("threshold") && !j["threshold"].is_null()) spec.threshold = number_or_inf(j["threshold"], "$.threshold");
  if (j.contains("cut_level") && !j["cut_level"].is_null()) spec.cut_level = number_or_inf(j["cut_level"], "$.cut_level");
  if (j.contains("delta") && !j["delta"].is_null()) spec.delta = as_number(j["delta"], "$.delta");
  try {
    spec.validate();
  } catch (const Error& e) {
    fail(ErrorCode::parse, std::string("$: ") + e.what());
  }
  return spec;
}

json tree_to_json(const MergeTree& t, const std::optional<std::string>& arc_map_path) {
  const double sign = t.superlevel ? -1.0 : 1.0;
  json nodes = json::array();
  for (std::size_t i = 0; i < t.nodes.size(); ++i) {
    const auto& n = t.nodes[i];
    nodes.push_back({{"id", i}, {"vertex", n.vertex}, {"value", sign * n.value}, {"kind", std::string(to_string(n.kind))}});
  }
  json arcs = json::array();
  for (std::size_t i = 0; i < t.arcs.size(); ++i)
    arcs.push_back({{"id", i}, {"lower", t.arcs[i].lower}, {"upper", t.arcs[i].upper}, {"size", t.arcs[i].members.size()}});
  const auto pairs = persistence_pairs(t);
  const auto hv = hypervolume_per_pair(t, pairs);
  json pj = json::array();
  for (std::size_t i = 0; i < pairs.size(); ++i)
    pj.push_back({{"minimum", pairs[i].minimum},
                  {"death", pairs[i].death},
                  {"persistence", pairs[i].persistence},
                  {"hypervolume", hv[i]}});
  const auto bd = branch_decomposition(t);
  json bj = json::array();
  for (std::size_t i = 0; i < bd.branches.size(); ++i) {
    const auto& b = bd.branches[i];
    bj.push_back({{"id", i},
                  {"minimum", b.minimum},
                  {"death", b.death},
                  {"persistence", b.persistence},
                  {"parent", b.parent ? json(*b.parent) : json(nullptr)},
                  {"children", b.children},
                  {"arcs", b.arcs}});
  }
  std::size_t leaves = 0, saddles = 0;
  for (const auto& n : t.nodes) {
    leaves += n.kind == NodeKind::leaf;
    saddles += n.kind == NodeKind::saddle;
  }
  json j = {{"format", "timt-merge-tree"},
            {"version", kFormatVersion},
            {"grid", grid_to_json(t.grid)},
            {"superlevel", t.superlevel},
            {"simplified", t.simplified},
            {"counts", {{"nodes", t.nodes.size()}, {"arcs", t.arcs.size()}, {"leaves", leaves}, {"saddles", saddles}}},
            {"nodes", nodes},
            {"arcs", arcs},
            {"pairs", pj},
            {"branches", bj}};
  if (arc_map_path)
    j["arc_map"] = {{"path", *arc_map_path}, {"dtype", "i32"}, {"endianness", "little"}, {"layout", "x-fastest"}};
  return j;
}

namespace {

fs::path with_suffix(const fs::path& stem, const std::string& suffix) {
  fs::path p = stem;
  p += suffix;
  return p;
}

void write_i32_volume(const fs::path& path, const std::vector<std::int32_t>& v) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(v.size() * 4);
  for (std::int32_t x : v) append_i32_le(bytes, x);
  write_bytes(path, bytes);
}

}  // namespace

fs::path write_tree(const MergeTree& t, const fs::path& stem, const json& simplification) {
  const fs::path raw = with_suffix(stem, ".arcs.raw");
  const fs::path doc = with_suffix(stem, ".json");
  write_i32_volume(raw, t.vertex_arc);
  json j = tree_to_json(t, raw.filename().string());
  j["simplification"] = simplification;
  write_text(doc, j.dump(2) + "\n");
  return doc;
}

json segmentation_to_json(const Segmentation& s, const std::optional<std::string>& labels_path) {
  json segs = json::array();
  for (const auto& g : s.segments)
    segs.push_back({{"id", g.id},
                    {"minimum_vertex", g.minimum_vertex},
                    {"minimum_value", g.minimum_value},
                    {"vertex_count", g.vertex_count},
                    {"metric", g.metric}});
  json report = json::array();
  for (const auto& r : segmentation_report(s))
    report.push_back({{"id", r.id}, {"minimum_value", r.minimum_value}, {"size", r.size}, {"metric", r.metric}});
  std::size_t background = 0;
  for (std::int32_t l : s.labels) background += l == kBackground;
  json j = {{"format", "timt-segmentation"},
            {"version", kFormatVersion},
            {"grid", grid_to_json(s.grid)},
            {"query", query_spec_to_json(s.spec)},
            {"background_label", kBackground},
            {"background_count", background},
            {"segments", segs},
            {"report", report},
            {"notes", s.notes}};
  if (labels_path)
    j["labels"] = {{"path", *labels_path}, {"dtype", "i32"}, {"endianness", "little"}, {"layout", "x-fastest"}};
  return j;
}

fs::path write_segmentation(const Segmentation& s, const fs::path& stem) {
  const fs::path raw = with_suffix(stem, ".labels.raw");
  const fs::path doc = with_suffix(stem, ".json");
  write_i32_volume(raw, s.labels);
  write_text(doc, segmentation_to_json(s, raw.filename().string()).dump(2) + "\n");
  return doc;
}

Segmentation read_segmentation(const fs::path& sidecar) {
  json j;
  try {
    j = json::parse(read_text(sidecar));
  } catch (const json::parse_error& e) {
    bad(sidecar.string(), e.what());
  }
  if (j.value("format", "") != "timt-segmentation") bad("$.format", "expected 'timt-segmentation'");
  if (j.value("version", 0) != kFormatVersion) bad("$.version", "unknown version");
  Segmentation s;
  s.grid = grid_from_json(member(j, "grid", "$"));
  s.spec = query_spec_from_json(member(j, "query", "$"));
  for (const auto& g : member(j, "segments", "$"))
    s.segments.push_back({g.at("id").get<std::int32_t>(), g.at("minimum_vertex").get<VertexId>(),
                          g.at("minimum_value").get<double>(), g.at("vertex_count").get<std::size_t>(),
                          g.at("metric").get<double>()});
  if (j.contains("notes")) s.notes = j["notes"].get<std::vector<std::string>>();
  const fs::path raw = sidecar.parent_path() / member(member(j, "labels", "$"), "path", "$.labels").get<std::string>();
  const auto bytes = read_bytes(raw);
  const std::size_t n = s.grid.vertex_count();
  if (bytes.size() != 4 * n)
    fail(ErrorCode::size_mismatch, "labels '" + raw.string() + "' hold " + std::to_string(bytes.size()) +
                                       " bytes, expected " + std::to_string(4 * n));
  s.labels.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.labels[i] = read_i32_le(bytes.data() + 4 * i);
  return s;
}

fs::path write_dictionary(const Dictionary& d, const SparseCodes* codes, const fs::path& stem) {
  const fs::path atoms_raw = with_suffix(stem, ".atoms.raw");
  const fs::path doc = with_suffix(stem, ".json");
  std::vector<std::uint8_t> bytes;
  for (Eigen::Index r = 0; r < d.atoms.rows(); ++r)
    for (Eigen::Index c = 0; c < d.atoms.cols(); ++c) append_f64_le(bytes, d.atoms(r, c));
  write_bytes(atoms_raw, bytes);

  json prov = json::array();
  for (const auto& p : d.provenance) prov.push_back(provenance_to_json(p));
  json j = {{"format", "timt-dictionary"},
            {"version", kFormatVersion},
            {"dimension", d.dimension()},
            {"atom_count", d.atom_count()},
            {"channels", d.channels},
            {"provenance", prov},
            {"training",
             {{"sparsity", d.meta.sparsity},
              {"iterations", d.meta.iterations},
              {"seed", d.meta.seed},
              {"rmse", d.meta.rmse},
              {"final_rmse", d.meta.final_rmse},
              {"reseeded_atoms", d.meta.reseeded_atoms}}},
            {"atoms", {{"path", atoms_raw.filename().string()}, {"dtype", "f64"}, {"endianness", "little"},
                       {"order", "row-major"}, {"shape", {d.dimension(), d.atom_count()}}}}};
  if (codes) {
    const fs::path codes_raw = with_suffix(stem, ".codes.raw");
    std::vector<std::uint8_t> cb;
    std::size_t entries = 0;
    for (std::size_t col = 0; col < codes->columns.size(); ++col)
      for (const auto& [atom, value] : codes->columns[col]) {
        append_i64_le(cb, static_cast<std::int64_t>(col));
        append_i64_le(cb, static_cast<std::int64_t>(atom));
        append_f64_le(cb, value);
        ++entries;
      }
    write_bytes(codes_raw, cb);
    j["codes"] = {{"path", codes_raw.filename().string()},
                  {"columns", codes->columns.size()},
                  {"entries", entries},
                  {"record", "i64 column, i64 atom, f64 value"},
                  {"endianness", "little"}};
  }
  write_text(doc, j.dump(2) + "\n");
  return doc;
}

std::pair<Dictionary, std::optional<SparseCodes>> read_dictionary(const fs::path& header) {
  json j;
  try {
    j = json::parse(read_text(header));
  } catch (const json::parse_error& e) {
    bad(header.string(), e.what());
  }
  if (j.value("format", "") != "timt-dictionary") bad("$.format", "expected 'timt-dictionary'");
  if (j.value("version", 0) != kFormatVersion) bad("$.version", "unknown version");
  Dictionary d;
  const auto m = member(j, "dimension", "$").get<std::size_t>();
  const auto k = member(j, "atom_count", "$").get<std::size_t>();
  d.channels = member(j, "channels", "$").get<std::vector<std::string>>();
  if (j.contains("provenance"))
    for (const auto& p : j["provenance"]) d.provenance.push_back(provenance_from_json(p));
  const json& tr = member(j, "training", "$");
  d.meta.sparsity = tr.value("sparsity", 1);
  d.meta.iterations = tr.value("iterations", 0);
  d.meta.seed = tr.value("seed", std::uint64_t{0});
  d.meta.rmse = tr.value("rmse", std::vector<double>{});
  d.meta.final_rmse = tr.value("final_rmse", 0.0);
  d.meta.reseeded_atoms = tr.value("reseeded_atoms", std::vector<std::size_t>{});

  const fs::path base = header.parent_path();
  const auto atoms = read_bytes(base / member(member(j, "atoms", "$"), "path", "$.atoms").get<std::string>());
  if (atoms.size() != 8 * m * k)
    fail(ErrorCode::size_mismatch, "dictionary atoms hold " + std::to_string(atoms.size()) + " bytes, expected " +
                                       std::to_string(8 * m * k));
  d.atoms.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < k; ++c)
      d.atoms(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = read_f64_le(atoms.data() + 8 * (r * k + c));
  validate(d);

  std::optional<SparseCodes> codes;
  if (j.contains("codes")) {
    const json& cj = j["codes"];
    const auto bytes = read_bytes(base / member(cj, "path", "$.codes").get<std::string>());
    const auto columns = member(cj, "columns", "$.codes").get<std::size_t>();
    const auto entries = member(cj, "entries", "$.codes").get<std::size_t>();
    if (bytes.size() != 24 * entries)
      fail(ErrorCode::size_mismatch, "dictionary codes hold " + std::to_string(bytes.size()) + " bytes, expected " +
                                         std::to_string(24 * entries));
    codes = SparseCodes{k, std::vector<SparseColumn>(columns)};
    for (std::size_t e = 0; e < entries; ++e) {
      const std::uint8_t* p = bytes.data() + 24 * e;
      const auto col = read_i64_le(p);
      const auto atom = read_i64_le(p + 8);
      if (col < 0 || static_cast<std::size_t>(col) >= columns || atom < 0 || static_cast<std::size_t>(atom) >= k)
        fail(ErrorCode::parse, "dictionary codes: entry " + std::to_string(e) + " out of range");
      codes->columns[static_cast<std::size_t>(col)].emplace_back(static_cast<std::size_t>(atom), read_f64_le(p + 16));
    }
  }
  return {std::move(d), std::move(codes)};
}

json suggestions_to_json(const std::vector<AtomSuggestion>& s) {
  json out = json::array();
  for (std::size_t rank = 0; rank < s.size(); ++rank)
    out.push_back({{"rank", rank}, {"atom", s[rank].atom}, {"score", s[rank].score}, {"trait", trait_to_json(s[rank].trait)}});
  return out;
}

json stability_report_to_json(const StabilityReport& r) {
  return {{"hausdorff", r.hausdorff},         {"hausdorff_exact", r.hausdorff_exact},
          {"sampling_step", r.sampling_step}, {"sampling_slack", r.sampling_slack},
          {"sup_diff", r.sup_diff},           {"bottleneck", r.bottleneck},
          {"tolerance", r.tolerance},         {"bottleneck_ok", r.bottleneck_ok},
          {"hausdorff_ok", r.hausdorff_ok},   {"chain_ok", r.chain_ok}};
}

json run_record_to_json(const RunRecord& r) {
  json inputs = json::object();
  for (const auto& [name, path] : r.inputs)
    inputs[name] = {{"path", path.generic_string()}, {"digest", fs::exists(path) ? file_digest(path) : "missing"}};
  json outputs = json::object();
  for (const auto& [name, path] : r.outputs)
    outputs[name] = {{"path", path.generic_string()}, {"digest", fs::exists(path) ? file_digest(path) : "missing"}};
  return {{"format", "timt-run-record"},
          {"version", kFormatVersion},
          {"tool", {{"name", "timt"}, {"version", kVersion}, {"format_version", kFormatVersion}}},
          {"command", r.command},
          {"parameters", r.parameters},
          {"inputs", inputs},
          {"outputs", outputs}};
}

void write_run_record(const RunRecord& r, const fs::path& path) {
  write_text(path, run_record_to_json(r).dump(2) + "\n");
}

}  // namespace timt::io
