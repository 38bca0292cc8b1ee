// Copyright 2026 The ech-lab Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "echlab/serialize.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "echlab/errors.hpp"
#include "json.hpp"

namespace echlab {

using nlohmann::json;

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  if (text == "inf" || text == "+inf") return kInfinity;
  double v = 0.0;
  const char* first = text.data();
  if (!text.empty() && text.front() == '+') ++first;
  const auto res = std::from_chars(first, text.data() + text.size(), v);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size() || text.empty()) {
    throw DomainError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double read_number(const json& j, const char* key) {
  if (!j.contains(key)) throw DomainError(std::string("missing field '") + key + "'");
  const auto& v = j.at(key);
  if (v.is_null()) return kInfinity;
  if (!v.is_number()) throw DomainError(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

json profile_json(const Profile& p) {
  if (p.is_power_law()) return {{"kind", "power"}, {"p", p.exponent()}};
  json pts = json::array();
  for (const auto& pt : p.points()) pts.push_back({pt.x, pt.y});
  return {{"kind", "pl"}, {"points", pts}};
}

Profile profile_from(const json& j) {
  if (!j.is_object()) throw DomainError("profile JSON must be an object");
  const std::string kind = j.value("kind", "");
  if (kind == "power") return Profile::power_law(read_number(j, "p"));
  if (kind == "pl") {
    if (!j.contains("points") || !j.at("points").is_array()) {
      throw DomainError("pl profile needs a 'points' array");
    }
    std::vector<Point2> pts;
    for (const auto& e : j.at("points")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw DomainError("pl points must be [x, y] number pairs");
      }
      pts.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return Profile::piecewise_linear(std::move(pts));
  }
  throw DomainError("unknown profile kind '" + kind + "' (expected power or pl)");
}

json spec_json(const DomainSpec& s) {
  switch (s.op()) {
    case DomainSpec::Op::kBall:
      return {{"op", "ball"}, {"a", s.a()}};
    case DomainSpec::Op::kEllipsoid:
      return {{"op", "ellipsoid"}, {"a", s.a()}, {"b", s.b()}};
    case DomainSpec::Op::kPolydisc:
      return {{"op", "polydisc"}, {"a", s.a()}, {"b", s.b()}};
    case DomainSpec::Op::kConcaveToric:
      return {{"op", "concave_toric"}, {"profile", profile_json(s.profile())}};
    case DomainSpec::Op::kScale:
      return {{"op", "scale"}, {"factor", s.factor()}, {"child", spec_json(s.child())}};
    case DomainSpec::Op::kCopies:
      return {{"op", "copies"}, {"n", s.count()}, {"child", spec_json(s.child())}};
    case DomainSpec::Op::kDisjointUnion: {
      json kids = json::array();
      for (const auto& c : s.children()) kids.push_back(spec_json(c));
      return {{"op", "union"}, {"children", kids}};
    }
  }
  return {};
}

DomainSpec spec_from(const json& j) {
  if (!j.is_object()) throw DomainError("domain JSON must be an object");
  if (!j.contains("op") && j.contains("kind")) return DomainSpec::concave_toric(profile_from(j));
  const std::string op = j.value("op", "");
  auto child = [&]() -> DomainSpec {
    if (!j.contains("child")) throw DomainError("'" + op + "' needs a 'child'");
    return spec_from(j.at("child"));
  };
  if (op == "ball") return DomainSpec::ball(read_number(j, "a"));
  if (op == "ellipsoid") return DomainSpec::ellipsoid(read_number(j, "a"), read_number(j, "b"));
  if (op == "polydisc") return DomainSpec::polydisc(read_number(j, "a"), read_number(j, "b"));
  if (op == "concave_toric") {
    if (!j.contains("profile")) throw DomainError("concave_toric needs a 'profile'");
    return DomainSpec::concave_toric(profile_from(j.at("profile")));
  }
  if (op == "scale") return DomainSpec::scale(read_number(j, "factor"), child());
  if (op == "copies") {
    if (!j.contains("n") || !j.at("n").is_number_integer()) {
      throw DomainError("copies needs an integer 'n'");
    }
    return DomainSpec::copies(j.at("n").get<std::int64_t>(), child());
  }
  if (op == "union") {
    if (!j.contains("children") || !j.at("children").is_array()) {
      throw DomainError("union needs a 'children' array");
    }
    std::vector<DomainSpec> kids;
    for (const auto& c : j.at("children")) kids.push_back(spec_from(c));
    return DomainSpec::disjoint_union(std::move(kids));
  }
  throw DomainError("unknown domain op '" + op + "'");
}

json parse_json_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw DomainError(std::string("malformed JSON: ") + e.what());
  }
}

// Recursive-descent reader for the inline grammar.
class InlineParser {
 public:
  explicit InlineParser(std::string_view text) : s_(text) {}

  DomainSpec spec() {
    const std::string word = ident();
    if (word == "union") {
      expect('(');
      std::vector<DomainSpec> kids{spec()};
      while (peek() == ';') {
        ++pos_;
        kids.push_back(spec());
      }
      expect(')');
      return DomainSpec::disjoint_union(std::move(kids));
    }
    if (word == "ball") return DomainSpec::ball(field());
    if (word == "ellipsoid") {
      const double a = field();
      return DomainSpec::ellipsoid(a, field());
    }
    if (word == "polydisc") {
      const double a = field();
      return DomainSpec::polydisc(a, field());
    }
    if (word == "scale") {
      const double c = field();
      expect(':');
      return DomainSpec::scale(c, spec());
    }
    if (word == "copies") {
      const double n = field();
      if (n != std::floor(n) || n < 1 || n > 1e15) throw DomainError("copies count must be a positive integer");
      expect(':');
      return DomainSpec::copies(static_cast<std::int64_t>(n), spec());
    }
    return DomainSpec::concave_toric(profile_after(word));
  }

  Profile profile() { return profile_after(ident()); }

  void finish() const {
    if (pos_ != s_.size()) {
      throw DomainError("unexpected trailing text '" + std::string(s_.substr(pos_)) + "'");
    }
  }

 private:
  Profile profile_after(const std::string& word) {
    if (word == "power") return Profile::power_law(field());
    if (word == "pl") {
      std::vector<Point2> pts;
      while (peek() == ':' && pos_ + 1 < s_.size() && starts_number(s_[pos_ + 1])) {
        ++pos_;
        const double x = number();
        expect(',');
        pts.push_back({x, number()});
      }
      if (pts.empty()) throw DomainError("pl profile needs at least one x,y point");
      return Profile::piecewise_linear(std::move(pts));
    }
    throw DomainError("unknown shape '" + word +
                      "' (expected ball, ellipsoid, polydisc, power, pl, scale, copies, union)");
  }

  static bool starts_number(char c) {
    return std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.';
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) {
      throw DomainError(std::string("expected '") + c + "' at position " + std::to_string(pos_) +
                        " of '" + std::string(s_) + "'");
    }
    ++pos_;
  }
  std::string ident() {
    const auto start = pos_;
    while (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (start == pos_) throw DomainError("expected a shape name at position " + std::to_string(pos_));
    return std::string(s_.substr(start, pos_ - start));
  }
  double field() {
    expect(':');
    return number();
  }
  double number() {
    const auto start = pos_;
    while (pos_ < s_.size() && s_[pos_] != ':' && s_[pos_] != ',' && s_[pos_] != ';' && s_[pos_] != ')') ++pos_;
    return parse_double(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view t) {
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.front()))) t.remove_prefix(1);
  while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.remove_suffix(1);
  return t;
}

std::string dump(const json& j, int indent) { return j.dump(indent); }

json fit_json(const FitResult& f) {
  return {{"exponent", number(f.exponent)},         {"log_coefficient", number(f.log_coefficient)},
          {"residual_rms", number(f.residual_rms)}, {"k_min", number(f.k_min)},
          {"k_max", number(f.k_max)},               {"sample_count", f.sample_count}};
}

json bracket_json(const CapacityBracket& b) {
  return {{"k", b.k},           {"lower", number(b.lower)}, {"upper", number(b.upper)},
          {"exact", b.exact},   {"converged", b.converged}, {"multiplicities", b.multiplicities},
          {"exhausted_budget", b.exhausted_budget}};
}

}  // namespace

Profile parse_profile(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '{') {
    const json j = parse_json_text(text);
    if (j.contains("op")) {
      const DomainSpec s = spec_from(j);
      if (s.op() != DomainSpec::Op::kConcaveToric) throw DomainError("expected a profile, got a non-toric domain");
      return s.profile();
    }
    return profile_from(j);
  }
  InlineParser p(text);
  Profile out = p.profile();
  p.finish();
  return out;
}

DomainSpec parse_spec(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '{') return spec_from(parse_json_text(text));
  InlineParser p(text);
  DomainSpec out = p.spec();
  p.finish();
  return out;
}

std::string to_json(const Profile& profile, int indent) { return dump(profile_json(profile), indent); }
std::string to_json(const DomainSpec& spec, int indent) { return dump(spec_json(spec), indent); }

std::string to_json(const WeightSequence& w, int indent) {
  json res = json::array();
  for (const auto& r : w.residues) res.push_back({{"cap", r.cap}, {"area", r.area}});
  return dump({{"head", w.head},
               {"tail_volume", w.tail_volume},
               {"tail_cap", w.tail_cap},
               {"finite", w.finite()},
               {"residues", res}},
              indent);
}

std::string to_json(const CapacityBracket& b, int indent) { return dump(bracket_json(b), indent); }

std::string to_json(const std::vector<CapacityBracket>& brackets, int indent) {
  json arr = json::array();
  for (const auto& b : brackets) arr.push_back(bracket_json(b));
  return dump(arr, indent);
}

std::string to_json(const std::vector<SubleadingPoint>& points, int indent) {
  json arr = json::array();
  for (const auto& p : points) {
    arr.push_back({{"k", p.k},
                   {"e_lower", number(p.e_lower)},
                   {"e_upper", number(p.e_upper)},
                   {"e_prime_upper", number(p.e_prime_upper)},
                   {"converged", p.converged}});
  }
  return dump(arr, indent);
}

std::string to_json(const FitResult& fit, int indent) { return dump(fit_json(fit), indent); }

std::string to_json(const ExponentInterval& iv, int indent) {
  return dump({{"lo", iv.lo},
               {"hi", iv.hi},
               {"allowance", iv.allowance},
               {"lower_edge", fit_json(iv.lower_edge)},
               {"upper_edge", fit_json(iv.upper_edge)},
               {"midpoint", fit_json(iv.midpoint)}},
              indent);
}

std::string to_json(const EchDimension& d, int indent) {
  return dump({{"value", d.value}, {"degenerate", d.degenerate}, {"used", d.used}, {"fit", fit_json(d.fit)}},
              indent);
}

std::string to_json(const CubePacking& packing, int indent) {
  json levels = json::array();
  for (const auto& l : packing.levels) {
    levels.push_back({{"level", l.level},
                      {"count", l.count},
                      {"side_area", l.side_area},
                      {"cube_volume", l.cube_volume}});
  }
  return dump({{"levels", levels}, {"packed_volume", packing.packed_volume()}}, indent);
}

std::string to_json(const std::vector<DecaySample>& samples, int indent) {
  json arr = json::array();
  for (const auto& s : samples) arr.push_back({{"d", s.d}, {"v", number(s.v)}});
  return dump(arr, indent);
}

std::string to_json(const DimensionEstimate& e, int indent) {
  return dump({{"dimension", number(e.dimension)}, {"fit", fit_json(e.fit)}}, indent);
}

std::string to_json(const ObstructionReport& r, int indent) {
  return dump({{"source", spec_json(r.source)},
               {"target", spec_json(r.target)},
               {"equal_volume_scale", number(r.equal_volume_scale)},
               {"witness_k", r.witness_k ? json(*r.witness_k) : json(nullptr)},
               {"source_lower", number(r.source_lower)},
               {"target_upper", number(r.target_upper)},
               {"scale_upper", number(r.scale_upper)},
               {"ratio_k", r.ratio_k},
               {"packing_upper", number(r.packing_upper)},
               {"scanned_k_max", r.scanned_k_max},
               {"unconverged_skipped", r.unconverged_skipped}},
              indent);
}

std::string to_json(const SymplecticDefect& d, int indent) {
  return dump({{"max_entry_error", d.max_entry_error}, {"det_error", d.det_error}}, indent);
}

std::string to_json(const InjectivityReport& r, int indent) {
  return dump({{"pairs", r.pairs}, {"collisions", r.collisions}, {"min_separation", number(r.min_separation)}},
              indent);
}

std::string to_json(const FoldingCheckReport& r, int indent) {
  auto defect = [](const SymplecticDefect& d) {
    return json{{"max_entry_error", d.max_entry_error}, {"det_error", d.det_error}};
  };
  return dump({{"jacobian_points", r.jacobian_points},
               {"psi", defect(r.psi)},
               {"xi", defect(r.xi)},
               {"containment_points", r.containment_points},
               {"outside", r.outside},
               {"r1_max", r.r1_max},
               {"r2_max", r.r2_max},
               {"z_disc", r.z_disc},
               {"w_disc", r.w_disc},
               {"sigma_limit", {number(r.sigma_limit.first), number(r.sigma_limit.second)}},
               {"injectivity",
                {{"pairs", r.injectivity.pairs},
                 {"collisions", r.injectivity.collisions},
                 {"min_separation", number(r.injectivity.min_separation)}}}},
              indent);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) throw DomainError("CSV row width does not match header");
  rows_.push_back(std::move(cells));
  return *this;
}

namespace {
void write_cell(std::ostream& out, const std::string& c) {
  if (c.find_first_of(",\"\n") == std::string::npos) {
    out << c;
    return;
  }
  out << '"';
  for (char ch : c) {
    if (ch == '"') out << '"';
    out << ch;
  }
  out << '"';
}
void write_row(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    write_cell(out, cells[i]);
  }
  out << '\n';
}
}  // namespace

void CsvTable::write(std::ostream& out) const {
  write_row(out, header_);
  for (const auto& r : rows_) write_row(out, r);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

CsvTable to_csv(const std::vector<CapacityBracket>& brackets) {
  CsvTable t({"k", "lower", "upper", "exact", "converged"});
  for (const auto& b : brackets) {
    t.row({CsvTable::cell(b.k), CsvTable::cell(b.lower), CsvTable::cell(b.upper), CsvTable::cell(b.exact),
           CsvTable::cell(b.converged)});
  }
  return t;
}

CsvTable to_csv(const WeightSequence& w) {
  CsvTable t({"index", "weight"});
  for (std::size_t i = 0; i < w.head.size(); ++i) {
    t.row({CsvTable::cell(static_cast<std::int64_t>(i + 1)), CsvTable::cell(w.head[i])});
  }
  return t;
}

CsvTable to_csv(const std::vector<SubleadingPoint>& points) {
  CsvTable t({"k", "e_lower", "e_upper", "e_prime_upper", "converged"});
  for (const auto& p : points) {
    t.row({CsvTable::cell(p.k), CsvTable::cell(p.e_lower), CsvTable::cell(p.e_upper),
           CsvTable::cell(p.e_prime_upper), CsvTable::cell(p.converged)});
  }
  return t;
}

CsvTable to_csv(const CubePacking& packing) {
  CsvTable t({"level", "count", "side_area", "cube_volume"});
  for (const auto& l : packing.levels) {
    t.row({CsvTable::cell(static_cast<std::int64_t>(l.level)), CsvTable::cell(l.count),
           CsvTable::cell(l.side_area), CsvTable::cell(l.cube_volume)});
  }
  return t;
}

CsvTable to_csv(const std::vector<DecaySample>& samples) {
  CsvTable t({"d", "v"});
  for (const auto& s : samples) t.row({CsvTable::cell(s.d), CsvTable::cell(s.v)});
  return t;
}

}  // namespace echlab
