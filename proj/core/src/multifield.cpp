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

#include "timt/multifield.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "timt/error.hpp"
#include "timt/tensor.hpp"

namespace timt {

std::string_view to_string(ProvenanceKind k) noexcept {
  switch (k) {
    case ProvenanceKind::raw: return "raw";
    case ProvenanceKind::derived: return "derived";
    case ProvenanceKind::normalized: return "normalized";
  }
  return "raw";
}

std::string_view to_string(Scaling s) noexcept {
  switch (s) {
    case Scaling::none: return "none";
    case Scaling::minmax: return "minmax";
    case Scaling::zscore: return "zscore";
  }
  return "none";
}

std::optional<Scaling> parse_scaling(std::string_view name) noexcept {
  if (name == "none") return Scaling::none;
  if (name == "minmax") return Scaling::minmax;
  if (name == "zscore") return Scaling::zscore;
  return std::nullopt;
}

std::string_view to_string(DerivedKind k) noexcept {
  switch (k) {
    case DerivedKind::eig1: return "eig1";
    case DerivedKind::eig2: return "eig2";
    case DerivedKind::eig3: return "eig3";
    case DerivedKind::c_l: return "c_l";
    case DerivedKind::c_p: return "c_p";
    case DerivedKind::c_s: return "c_s";
    case DerivedKind::max_shear: return "max_shear";
    case DerivedKind::vec_magnitude: return "vec_magnitude";
  }
  return "eig1";
}

std::optional<DerivedKind> parse_derived_kind(std::string_view name) noexcept {
  for (auto k : {DerivedKind::eig1, DerivedKind::eig2, DerivedKind::eig3, DerivedKind::c_l,
                 DerivedKind::c_p, DerivedKind::c_s, DerivedKind::max_shear,
                 DerivedKind::vec_magnitude})
    if (to_string(k) == name) return k;
  return std::nullopt;
}

void MultiField::add_channel(Channel channel) {
  if (channel.name.empty()) fail(ErrorCode::invalid_argument, "channel name is empty");
  if (find(channel.name))
    fail(ErrorCode::invalid_argument, "duplicate channel name '" + channel.name + "'");
  if (channel.values.size() != vertex_count())
    fail(ErrorCode::size_mismatch, "channel '" + channel.name + "' has " +
                                       std::to_string(channel.values.size()) +
                                       " values, grid has " + std::to_string(vertex_count()));
  for (std::size_t i = 0; i < channel.values.size(); ++i)
    if (!std::isfinite(channel.values[i]))
      fail(ErrorCode::non_finite, "channel '" + channel.name +
                                      "' has a non-finite value at vertex " + std::to_string(i));
  channels_.push_back(std::move(channel));
}

const Channel& MultiField::channel(std::string_view name) const {
  return channels_[require(name)];
}

std::optional<std::size_t> MultiField::find(std::string_view name) const noexcept {
  for (std::size_t i = 0; i < channels_.size(); ++i)
    if (channels_[i].name == name) return i;
  return std::nullopt;
}

std::size_t MultiField::require(std::string_view name) const {
  if (auto i = find(name)) return *i;
  fail(ErrorCode::unknown_channel, "unknown channel '" + std::string(name) + "'");
}

std::vector<std::string> MultiField::channel_names() const {
  std::vector<std::string> out;
  out.reserve(channels_.size());
  for (const auto& c : channels_) out.push_back(c.name);
  return out;
}

std::vector<double> MultiField::attribute_vector(VertexId v) const {
  std::vector<double> out(channels_.size());
  for (std::size_t c = 0; c < channels_.size(); ++c)
    out[c] = channels_[c].values.at(static_cast<std::size_t>(v));
  return out;
}

MultiField MultiField::with_connectivity(Connectivity c) const {
  MultiField out(grid_.with_connectivity(c));
  out.channels_ = channels_;
  return out;
}

namespace {

Channel rescale(const Channel& in, Scaling s) {
  Channel out = in;
  const auto& v = in.values;
  if (s == Scaling::none) return out;
  if (s == Scaling::minmax) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    if (v.empty() || !(*hi > *lo))
      fail(ErrorCode::degenerate_channel,
           "channel '" + in.name + "' is constant; minmax scaling undefined");
    const double a = *lo, span = *hi - *lo;
    for (double& x : out.values) x = (x - a) / span;
    out.provenance = {ProvenanceKind::normalized, "minmax", {a, *hi}};
    return out;
  }
  const double n = static_cast<double>(v.size());
  double mean = 0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
  if (!(sd > 0))
    fail(ErrorCode::degenerate_channel,
         "channel '" + in.name + "' has zero variance; zscore scaling undefined");
  for (double& x : out.values) x = (x - mean) / sd;
  out.provenance = {ProvenanceKind::normalized, "zscore", {mean, sd}};
  return out;
}

}  // namespace

MultiField assemble_attribute_space(const MultiField& mf, std::span<const std::string> selection,
                                    std::span<const Scaling> scaling) {
  if (scaling.size() > 1 && scaling.size() != selection.size())
    fail(ErrorCode::invalid_argument, "scaling list must have 0, 1 or |selection| entries");
  MultiField out(mf.grid());
  for (std::size_t i = 0; i < selection.size(); ++i) {
    const Scaling s = scaling.empty() ? Scaling::none
                      : scaling.size() == 1 ? scaling[0]
                                            : scaling[i];
    out.add_channel(rescale(mf.channel(selection[i]), s));
  }
  return out;
}

namespace {

std::size_t arity(DerivedKind k) { return k == DerivedKind::vec_magnitude ? 3 : 6; }

std::string describe_vertices(const std::vector<std::size_t>& bad) {
  std::ostringstream os;
  os << bad.size() << " vertices (first:";
  for (std::size_t i = 0; i < bad.size() && i < 16; ++i) os << ' ' << bad[i];
  os << ')';
  return os.str();
}

}  // namespace

MultiField derive_channel(const MultiField& mf, DerivedKind kind,
                          std::span<const std::string> inputs, std::string output_name) {
  if (inputs.size() != arity(kind))
    fail(ErrorCode::invalid_argument, std::string(to_string(kind)) + " expects " +
                                          std::to_string(arity(kind)) + " input channels, got " +
                                          std::to_string(inputs.size()));
  std::vector<const std::vector<double>*> in;
  for (const auto& name : inputs) in.push_back(&mf.channel(name).values);

  const std::size_t n = mf.vertex_count();
  Channel out;
  out.name = output_name.empty() ? std::string(to_string(kind)) : std::move(output_name);
  out.values.resize(n);
  out.provenance = {ProvenanceKind::derived, std::string(to_string(kind)), {}};

  std::vector<std::size_t> degenerate;
  for (std::size_t i = 0; i < n; ++i) {
    if (kind == DerivedKind::vec_magnitude) {
      const double x = (*in[0])[i], y = (*in[1])[i], z = (*in[2])[i];
      out.values[i] = std::sqrt(x * x + y * y + z * z);
      continue;
    }
    const Sym3Tensor t{(*in[0])[i], (*in[1])[i], (*in[2])[i],
                       (*in[3])[i], (*in[4])[i], (*in[5])[i]};
    const EigenTriple e = sym3_eigenvalues(t);
    switch (kind) {
      case DerivedKind::eig1: out.values[i] = e.l1; break;
      case DerivedKind::eig2: out.values[i] = e.l2; break;
      case DerivedKind::eig3: out.values[i] = e.l3; break;
      case DerivedKind::max_shear: out.values[i] = max_shear(e); break;
      default: {
        if (westin_degenerate(e)) {
          degenerate.push_back(i);
          break;
        }
        const WestinMeasures w = westin_measures(e);
        out.values[i] = kind == DerivedKind::c_l   ? w.linear
                        : kind == DerivedKind::c_p ? w.planar
                                                   : w.spherical;
      }
    }
  }
  if (!degenerate.empty())
    fail(ErrorCode::degenerate_trace,
         std::string(to_string(kind)) + ": zero eigenvalue trace at " +
             describe_vertices(degenerate));

  MultiField result = mf;
  result.add_channel(std::move(out));
  return result;
}

}  // namespace timt
