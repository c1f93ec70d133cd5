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

#include <CLI11.hpp>

#include <cmath>
#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "pipeline.hpp"
#include "service.hpp"
#include "timt/error.hpp"
#include "timt/io/binary.hpp"
#include "timt/io/dataset.hpp"
#include "timt/io/documents.hpp"
#include "timt/io/fixtures.hpp"
#include "timt/stability.hpp"
#include "timt/version.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace timt;

namespace {

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = 0;
  std::string connectivity;
  std::string semantics;
  std::string record;
};

std::optional<Connectivity> connectivity_of(const Common& c) {
  if (c.connectivity.empty()) return std::nullopt;
  return parse_connectivity(c.connectivity);
}

void apply_semantics(const Common& c, TraitExpr& t) {
  if (!c.semantics.empty()) t.semantics = *parse_semantics(c.semantics);
}

double number_arg(const std::string& text, const std::string& what) {
  if (text == "inf" || text == "+inf") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + ": expected a number or 'inf', got '" + text + "'");
}

fs::path stem_of(const fs::path& p) {
  fs::path s = p;
  if (s.extension() == ".json") s.replace_extension();
  return s;
}

fs::path with_ext(const fs::path& stem, const std::string& ext) { return fs::path(stem.string() + ext); }

void finish(const Common& c, io::RunRecord r, const fs::path& primary) {
  // Dataset inputs are hashed together with their payload files.
  for (const auto& [name, path] : std::map(r.inputs)) {
    if (path.extension() != ".json") continue;
    try {
      const io::DatasetManifest m = io::read_manifest(path);
      std::set<std::string> payloads;
      for (const auto& ch : m.channels) payloads.insert(ch.path);
      for (const auto& p : payloads) r.inputs[name + ":" + p] = path.parent_path() / p;
    } catch (const Error&) {
    }
  }
  r.parameters["seed"] = c.seed;
  r.parameters["connectivity"] = c.connectivity.empty() ? json(nullptr) : json(c.connectivity);
  r.parameters["semantics"] = c.semantics.empty() ? json(nullptr) : json(c.semantics);
  const fs::path path = c.record.empty() ? with_ext(stem_of(primary), ".run.json") : fs::path(c.record);
  io::write_run_record(r, path);
}

void print(const json& j) { std::cout << j.dump() << '\n'; }

CLI::App* subcommand(CLI::App& app, const std::string& name, const std::string& help, Common& common) {
  CLI::App* sub = app.add_subcommand(name, help);
  sub->add_option("--seed", common.seed, "Random seed (recorded for every command)");
  sub->add_option("--connectivity", common.connectivity, "Override the grid neighborhood")
      ->check(CLI::IsMember({"face6", "vertex26", "edge4", "vertex8"}));
  sub->add_option("--semantics", common.semantics, "Boolean operator semantics for traits")
      ->check(CLI::IsMember({"csg", "paper_literal"}));
  sub->add_option("--record", common.record, "Run-record path (default: <output stem>.run.json)");
  return sub;
}

MultiField load(const std::string& path, const Common& c) { return io::load_dataset(path, connectivity_of(c)); }

ScalarField load_field(const std::string& path, const Common& c) {
  ScalarField f = io::load_scalar_field(path);
  if (auto conn = connectivity_of(c)) f.grid = f.grid.with_connectivity(*conn);
  return f;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topological analysis of multi-field data through trait-induced merge trees", "timt"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);
  Common common;
  std::function<void()> action;

  // fixture
  std::string fixture_kind, fixture_out;
  std::vector<std::int64_t> fixture_dims;
  std::optional<std::size_t> fixture_channels;
  std::optional<double> fixture_noise, fixture_width;
  {
    auto* sub = subcommand(app, "fixture", "Generate a synthetic dataset", common);
    sub->add_option("kind", fixture_kind, "crossing_stripes_2d | two_blob_3d | tensor_block")
        ->required()
        ->check(CLI::IsMember({"crossing_stripes_2d", "two_blob_3d", "tensor_block"}));
    sub->add_option("-o,--out", fixture_out, "Output manifest")->required();
    sub->add_option("--dims", fixture_dims, "nx ny nz")->expected(3);
    sub->add_option("--channels", fixture_channels, "Channel count (crossing_stripes_2d)");
    sub->add_option("--noise", fixture_noise, "Gaussian noise standard deviation");
    sub->add_option("--width", fixture_width, "Stripe width in vertices (crossing_stripes_2d)");
    sub->callback([&] {
      action = [&] {
        io::FixtureParams p;
        if (!fixture_dims.empty()) p.dims = std::array<std::int64_t, 3>{fixture_dims[0], fixture_dims[1], fixture_dims[2]};
        p.channels = fixture_channels;
        p.noise = fixture_noise;
        p.width = fixture_width;
        MultiField mf = io::generate_fixture(*io::parse_fixture_kind(fixture_kind), p, common.seed);
        if (auto conn = connectivity_of(common)) mf = mf.with_connectivity(*conn);
        const fs::path out = io::save_dataset(mf, fixture_out);
        json params = {{"kind", fixture_kind}};
        if (p.dims) params["dims"] = *p.dims;
        if (p.channels) params["channels"] = *p.channels;
        if (p.noise) params["noise"] = *p.noise;
        if (p.width) params["width"] = *p.width;
        finish(common, {"fixture", params, {}, {{"dataset", out}, {"payload", with_ext(stem_of(out), ".raw")}}}, out);
        print({{"dataset", out.generic_string()}, {"vertices", mf.vertex_count()}, {"channels", mf.channel_names()}});
      };
    });
  }

  // ingest
  std::string ingest_in, ingest_out;
  std::vector<std::string> ingest_select, ingest_scaling;
  {
    auto* sub = subcommand(app, "ingest", "Validate a dataset and assemble its attribute space", common);
    sub->add_option("manifest", ingest_in)->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", ingest_out, "Output manifest")->required();
    sub->add_option("--select", ingest_select, "Channels to keep, in order")->delimiter(',');
    sub->add_option("--scaling", ingest_scaling, "none | minmax | zscore, one for all or one per channel")
        ->delimiter(',')
        ->check(CLI::IsMember({"none", "minmax", "zscore"}));
    sub->callback([&] {
      action = [&] {
        const MultiField mf = load(ingest_in, common);
        std::vector<std::string> selection = ingest_select.empty() ? mf.channel_names() : ingest_select;
        std::vector<Scaling> scaling;
        for (const auto& s : ingest_scaling) scaling.push_back(*parse_scaling(s));
        const MultiField out_mf = assemble_attribute_space(mf, selection, scaling);
        const fs::path out = io::save_dataset(out_mf, ingest_out);
        finish(common,
               {"ingest", {{"select", selection}, {"scaling", ingest_scaling}}, {{"dataset", ingest_in}},
                {{"dataset", out}, {"payload", with_ext(stem_of(out), ".raw")}}},
               out);
        print({{"dataset", out.generic_string()},
               {"grid", io::grid_to_json(out_mf.grid())},
               {"stats", tools::channel_stats(out_mf)}});
      };
    });
  }

  // derive
  std::string derive_in, derive_out, derive_kind, derive_name;
  std::vector<std::string> derive_inputs;
  {
    auto* sub = subcommand(app, "derive", "Append a derived channel (eigenvalues, Westin measures, ...)", common);
    sub->add_option("manifest", derive_in)->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", derive_out, "Output manifest")->required();
    sub->add_option("--kind", derive_kind, "eig1 eig2 eig3 c_l c_p c_s max_shear vec_magnitude")
        ->required()
        ->check(CLI::IsMember({"eig1", "eig2", "eig3", "c_l", "c_p", "c_s", "max_shear", "vec_magnitude"}));
    sub->add_option("--inputs", derive_inputs, "Input channels: xx,yy,zz,xy,xz,yz or x,y,z")
        ->required()
        ->delimiter(',');
    sub->add_option("--name", derive_name, "Name of the new channel");
    sub->callback([&] {
      action = [&] {
        const MultiField mf = load(derive_in, common);
        const MultiField out_mf = derive_channel(mf, *parse_derived_kind(derive_kind), derive_inputs, derive_name);
        const fs::path out = io::save_dataset(out_mf, derive_out);
        finish(common,
               {"derive", {{"kind", derive_kind}, {"inputs", derive_inputs}, {"name", derive_name}},
                {{"dataset", derive_in}}, {{"dataset", out}, {"payload", with_ext(stem_of(out), ".raw")}}},
               out);
        print({{"dataset", out.generic_string()}, {"channel", out_mf.channel(out_mf.channel_count() - 1).name}});
      };
    });
  }

  // trait-eval
  std::string te_in, te_trait, te_out, te_measure = "distance";
  {
    auto* sub = subcommand(app, "trait-eval", "Evaluate a trait document into a distance field", common);
    sub->add_option("manifest", te_in)->required()->check(CLI::ExistingFile);
    sub->add_option("--trait", te_trait, "Trait document")->required()->check(CLI::ExistingFile);
    sub->add_option("--measure", te_measure, "distance, or similarity for a single point trait (1 - cosine)")
        ->check(CLI::IsMember({"distance", "similarity"}));
    sub->add_option("-o,--out", te_out, "Output field manifest")->required();
    sub->callback([&] {
      action = [&] {
        const MultiField mf = load(te_in, common);
        TraitExpr trait = io::read_trait(te_trait);
        apply_semantics(common, trait);
        const tools::Measure measure = *tools::parse_measure(te_measure);
        json info = {{"measure", te_measure}};
        ScalarField field;
        if (measure == tools::Measure::distance) {
          TraitEvaluation ev = evaluate_trait(trait, mf);
          field = std::move(ev.field);
          info["clamped"] = ev.clamped;
          json caps = json::array();
          for (const auto& c : ev.caps) caps.push_back({{"channel", c.channel}, {"upper", c.upper}, {"value", c.value}});
          info["caps"] = caps;
        } else {
          field = tools::trait_field(trait, mf, measure);
        }
        const fs::path out = io::save_scalar_field(field, te_out);
        finish(common,
               {"trait-eval", {{"measure", te_measure}, {"trait_semantics", std::string(to_string(trait.semantics))}},
                {{"dataset", te_in}, {"trait", te_trait}},
                {{"field", out}, {"payload", with_ext(stem_of(out), ".raw")}}},
               out);
        const auto [lo, hi] = std::minmax_element(field.values.begin(), field.values.end());
        info["field"] = out.generic_string();
        info["min"] = *lo;
        info["max"] = *hi;
        print(info);
      };
    });
  }

  // mt
  std::string mt_in, mt_out, mt_metric, mt_threshold = "0";
  bool mt_superlevel = false;
  {
    auto* sub = subcommand(app, "mt", "Compute and export the merge tree of a scalar field", common);
    sub->add_option("field", mt_in, "Scalar-field manifest")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", mt_out, "Output stem (<stem>.json, <stem>.arcs.raw)")->required();
    sub->add_flag("--superlevel", mt_superlevel, "Sweep from the top (join tree of -h)");
    sub->add_option("--simplify-metric", mt_metric, "persistence | hypervolume")
        ->check(CLI::IsMember({"persistence", "hypervolume"}));
    sub->add_option("--simplify-threshold", mt_threshold, "Threshold, a number or 'inf'");
    sub->callback([&] {
      action = [&] {
        tools::TreeOptions opts;
        opts.superlevel = mt_superlevel;
        if (!mt_metric.empty()) {
          opts.simplify_metric = parse_simplify_metric(mt_metric);
          opts.simplify_threshold = number_arg(mt_threshold, "--simplify-threshold");
        }
        const ScalarField field = load_field(mt_in, common);
        const MergeTree t = tools::build_tree(field, opts);
        const fs::path stem = stem_of(mt_out);
        const fs::path out = io::write_tree(t, stem, tools::simplification_json(opts));
        finish(common,
               {"mt", {{"superlevel", mt_superlevel}, {"simplification", tools::simplification_json(opts)}},
                {{"field", mt_in}}, {{"tree", out}, {"arcs", with_ext(stem, ".arcs.raw")}}},
               out);
        const json doc = io::tree_to_json(t);
        print({{"tree", out.generic_string()}, {"counts", doc["counts"]}});
      };
    });
  }

  // segment
  std::string seg_in, seg_out, seg_method, seg_metric = "persistence", seg_threshold = "0", seg_cut, seg_delta,
                                            seg_spec;
  {
    auto* sub = subcommand(app, "segment", "Segment a scalar field with a merge-tree query", common);
    sub->add_option("field", seg_in, "Scalar-field manifest")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", seg_out, "Output stem (<stem>.json, <stem>.labels.raw)")->required();
    sub->add_option("--spec", seg_spec, "Query spec document instead of the flags below")->check(CLI::ExistingFile);
    sub->add_option("--method", seg_method, "branch_decomposition | leaf_arcs | subtrees | crown")
        ->check(CLI::IsMember({"branch_decomposition", "leaf_arcs", "subtrees", "crown"}));
    sub->add_option("--metric", seg_metric, "persistence | hypervolume")
        ->check(CLI::IsMember({"persistence", "hypervolume"}));
    sub->add_option("--threshold", seg_threshold, "Simplification threshold, a number or 'inf'");
    sub->add_option("--cut-level", seg_cut, "Cut level (subtrees)");
    sub->add_option("--delta", seg_delta, "Crown height");
    sub->callback([&] {
      if (seg_spec.empty() && seg_method.empty()) throw CLI::RequiredError("--method or --spec");
      QuerySpec spec;
      if (seg_spec.empty()) {
        spec.method = *parse_query_method(seg_method);
        spec.metric = *parse_simplify_metric(seg_metric);
        spec.threshold = number_arg(seg_threshold, "--threshold");
        if (!seg_cut.empty()) spec.cut_level = number_arg(seg_cut, "--cut-level");
        if (!seg_delta.empty()) spec.delta = number_arg(seg_delta, "--delta");
        if (spec.method == QueryMethod::subtrees && !spec.cut_level)
          throw UsageError("--method subtrees requires --cut-level");
        if (spec.method == QueryMethod::crown && !spec.delta) throw UsageError("--method crown requires --delta");
        try {
          spec.validate();
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }
      action = [&, spec] {
        const QuerySpec q = seg_spec.empty() ? spec : io::query_spec_from_json(json::parse(io::read_text(seg_spec)));
        const ScalarField field = load_field(seg_in, common);
        const Segmentation s = tools::segment_field(field, q);
        const fs::path stem = stem_of(seg_out);
        const fs::path out = io::write_segmentation(s, stem);
        io::RunRecord r{"segment", {{"query", io::query_spec_to_json(q)}}, {{"field", seg_in}},
                        {{"segmentation", out}, {"labels", with_ext(stem, ".labels.raw")}}};
        if (!seg_spec.empty()) r.inputs["spec"] = seg_spec;
        finish(common, r, out);
        print({{"segmentation", out.generic_string()}, {"segments", s.segments.size()}});
      };
    });
  }

  // dict-learn
  std::string dl_in, dl_out;
  std::vector<std::string> dl_channels;
  std::size_t dl_atoms = 0;
  int dl_sparsity = 1, dl_iterations = 30;
  bool dl_no_early_stop = false;
  {
    auto* sub = subcommand(app, "dict-learn", "Learn a K-SVD dictionary over the attribute space", common);
    sub->add_option("manifest", dl_in)->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", dl_out, "Output stem (<stem>.json, .atoms.raw, .codes.raw)")->required();
    sub->add_option("--channels", dl_channels, "Attribute channels (default: all but ground truth)")->delimiter(',');
    sub->add_option("--atoms", dl_atoms, "K, number of atoms (0: twice the dimension)");
    sub->add_option("--sparsity", dl_sparsity, "T0, nonzeros per code")->check(CLI::PositiveNumber);
    sub->add_option("--iterations", dl_iterations, "Maximum K-SVD iterations")->check(CLI::NonNegativeNumber);
    sub->add_flag("--no-early-stop", dl_no_early_stop, "Run every iteration");
    sub->callback([&] {
      action = [&] {
        const MultiField mf = load(dl_in, common);
        tools::LearnOptions opts;
        opts.channels = dl_channels;
        opts.ksvd.atoms = dl_atoms;
        opts.ksvd.sparsity = dl_sparsity;
        opts.ksvd.iterations = dl_iterations;
        opts.ksvd.seed = common.seed;
        opts.ksvd.early_stop = !dl_no_early_stop;
        const auto learned = tools::learn_dictionary(mf, opts);
        const fs::path stem = stem_of(dl_out);
        const fs::path out = io::write_dictionary(learned.dictionary, &learned.codes, stem);
        finish(common,
               {"dict-learn",
                {{"channels", learned.dictionary.channels},
                 {"atoms", learned.dictionary.atom_count()},
                 {"sparsity", dl_sparsity},
                 {"iterations", dl_iterations},
                 {"early_stop", !dl_no_early_stop}},
                {{"dataset", dl_in}},
                {{"dictionary", out}, {"atoms", with_ext(stem, ".atoms.raw")}, {"codes", with_ext(stem, ".codes.raw")}}},
               out);
        print({{"dictionary", out.generic_string()},
               {"atoms", learned.dictionary.atom_count()},
               {"iterations", learned.dictionary.meta.iterations},
               {"final_rmse", learned.dictionary.meta.final_rmse}});
      };
    });
  }

  // dict-suggest
  std::string ds_dict, ds_in, ds_out, ds_traits;
  {
    auto* sub = subcommand(app, "dict-suggest", "Rank dictionary atoms as point traits", common);
    sub->add_option("dictionary", ds_dict, "Dictionary header")->required()->check(CLI::ExistingFile);
    sub->add_option("manifest", ds_in, "Dataset the dictionary was learned on")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", ds_out, "Output suggestions document")->required();
    sub->add_option("--traits-dir", ds_traits, "Also write one trait document per atom here");
    sub->callback([&] {
      action = [&] {
        const MultiField mf = load(ds_in, common);
        auto [dict, codes] = io::read_dictionary(ds_dict);
        const MultiField space = assemble_attribute_space(mf, dict.channels);
        if (!codes) {
          const Eigen::MatrixXd x = attribute_matrix(space);
          codes = SparseCodes{dict.atom_count(), {}};
          for (Eigen::Index c = 0; c < x.cols(); ++c)
            codes->columns.push_back(omp_sparse_code(dict.atoms, x.col(c), dict.meta.sparsity).code);
        }
        auto suggestions = suggest_atom_traits(dict, *codes, space);
        io::RunRecord r{"dict-suggest", {{"traits_dir", ds_traits}}, {{"dictionary", ds_dict}, {"dataset", ds_in}}, {}};
        json traits = json::array();
        for (auto& s : suggestions) {
          apply_semantics(common, s.trait);
          if (ds_traits.empty()) continue;
          const fs::path p = fs::path(ds_traits) / ("atom-" + std::to_string(s.atom) + ".json");
          io::write_text(p, io::canonical_trait_document(s.trait) + "\n");
          r.outputs["trait_atom_" + std::to_string(s.atom)] = p;
          traits.push_back(p.generic_string());
        }
        const json doc = {{"format", "timt-suggestions"},
                          {"version", io::kFormatVersion},
                          {"suggestions", io::suggestions_to_json(suggestions)}};
        io::write_text(ds_out, doc.dump(2) + "\n");
        r.outputs["suggestions"] = ds_out;
        finish(common, r, ds_out);
        json ranked = json::array();
        for (const auto& s : suggestions) ranked.push_back({{"atom", s.atom}, {"score", s.score}});
        print({{"suggestions", ds_out}, {"ranking", ranked}, {"traits", traits}});
      };
    });
  }

  // stability
  std::string st_in, st_a, st_b, st_out;
  double st_tol = 1e-9, st_step = 0.05;
  {
    auto* sub = subcommand(app, "stability", "Check d_B <= sup|h1 - h2| <= d_H for two traits", common);
    sub->add_option("manifest", st_in)->required()->check(CLI::ExistingFile);
    sub->add_option("--trait-a", st_a)->required()->check(CLI::ExistingFile);
    sub->add_option("--trait-b", st_b)->required()->check(CLI::ExistingFile);
    sub->add_option("--tolerance", st_tol)->check(CLI::NonNegativeNumber);
    sub->add_option("--step", st_step, "Hausdorff sampling step for extended traits")->check(CLI::PositiveNumber);
    sub->add_option("-o,--out", st_out, "Report document")->required();
    sub->callback([&] {
      action = [&] {
        const MultiField mf = load(st_in, common);
        TraitExpr a = io::read_trait(st_a), b = io::read_trait(st_b);
        apply_semantics(common, a);
        apply_semantics(common, b);
        const StabilityReport rep = verify_stability_chain(a, b, mf, st_tol, st_step);
        const json doc = io::stability_report_to_json(rep);
        io::write_text(st_out, doc.dump(2) + "\n");
        finish(common,
               {"stability", {{"tolerance", st_tol}, {"step", st_step}},
                {{"dataset", st_in}, {"trait_a", st_a}, {"trait_b", st_b}}, {{"report", st_out}}},
               st_out);
        print(doc);
        if (!rep.chain_ok) fail(ErrorCode::invalid_argument, "stability chain violated");
      };
    });
  }

  // serve
  std::string sv_in, sv_host, sv_static, sv_dict;
  int sv_port = -1;
  {
    auto* sub = subcommand(app, "serve", "Serve the HTTP API over one dataset", common);
    sub->add_option("manifest", sv_in)->required()->check(CLI::ExistingFile);
    sub->add_option("--host", sv_host, "Bind address (default: TIMT_BIND or 127.0.0.1)");
    sub->add_option("--port", sv_port, "Port, 0 for any free port (default: TIMT_BIND/TIMT_PORT or 8765)")
        ->check(CLI::Range(0, 65535));
    sub->add_option("--static", sv_static, "Directory served under /ui")->check(CLI::ExistingDirectory);
    sub->add_option("--dictionary", sv_dict, "Dictionary served by /dictionary/suggestions")->check(CLI::ExistingFile);
    sub->callback([&] {
      action = [&] {
        auto [host, port] = service::bind_address_from_env();
        if (!sv_host.empty()) host = sv_host;
        if (sv_port >= 0) port = sv_port;
        service::ServiceOptions opts;
        opts.dataset_name = fs::path(sv_in).stem().string();
        if (!sv_static.empty()) opts.static_dir = sv_static;
        if (!sv_dict.empty()) {
          auto [d, c] = io::read_dictionary(sv_dict);
          opts.dictionary = std::move(d);
          opts.codes = std::move(c);
        }
        service::Service svc(load(sv_in, common), std::move(opts));
        const int bound = svc.bind(host, port);
        if (bound < 0) fail(ErrorCode::io, "cannot bind " + host + ":" + std::to_string(port));
        if (!common.record.empty()) {
          io::RunRecord r{"serve", {{"host", host}, {"port", bound}}, {{"dataset", sv_in}}, {}};
          if (!sv_dict.empty()) r.inputs["dictionary"] = sv_dict;
          finish(common, r, common.record);
        }
        print({{"listening", host + ":" + std::to_string(bound)}});
        std::cout.flush();
        svc.run();
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "timt: " << e.what() << '\n';
    return 2;
  }

  try {
    if (action) action();
  } catch (const UsageError& e) {
    std::cerr << "timt: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << json{{"error", {{"code", std::string(to_string(e.code())), }, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", {{"code", "parse"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"code", "internal"}, {"message", e.what()}}}}.dump() << '\n';
    return 1;
  }
  return 0;
}
