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

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "echlab/asymptotics.hpp"
#include "echlab/bounds.hpp"
#include "echlab/capacities.hpp"
#include "echlab/errors.hpp"
#include "echlab/folding.hpp"
#include "echlab/minkowski.hpp"
#include "echlab/packing.hpp"
#include "echlab/serialize.hpp"
#include "echlab/verify.hpp"
#include "echlab/weights.hpp"
#include "json.hpp"

namespace echlab::cli {

namespace {

using nlohmann::json;

constexpr const char* kGrammar = R"(Domain and profile specs (inline, or a path to a JSON file):
  ball:A                 ball B(A), A = area
  ellipsoid:A:B          ellipsoid E(A,B)
  polydisc:A:B           polydisc P(A,B)
  power:P                concave toric domain of f(x) = (1+x)^-P, P > 1
  pl:X,Y:X,Y:...         concave toric domain of a piecewise-linear f
  scale:C:SPEC           areas multiplied by C
  copies:N:SPEC          N disjoint copies
  union(SPEC;SPEC;...)   disjoint union
Index lists: 0..10 (integer range), 1,5,9 (list), or mixtures of both.
Grids: LO..HI for a geometric grid (24 per decade for k, 16 for d), LO..HI/N
for N points per decade, or an explicit comma list.
Exit codes: 0 success, 1 invalid input, 2 unconverged result under --strict.
ECH_LAB_THREADS sets the worker count when --threads is absent.)";

// Raised for results that are valid but unconverged while --strict is set.
struct Unconverged {
  std::string what;
};

struct Common {
  std::string format;  // empty until --format is given
  std::string fallback;
  std::string out;
  unsigned threads = 0;
  bool strict = false;
};

void add_common(CLI::App* cmd, Common& c, const char* default_format) {
  c.fallback = default_format;
  cmd->add_option("--format", c.format, std::string("Output format, csv or json (default ") + default_format + ")")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--out", c.out, "Write the artifact to this file instead of stdout");
  cmd->add_option("--threads", c.threads, "Worker threads (default: ECH_LAB_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", c.strict, "Exit with status 2 when a result is unconverged");
}

std::string read_spec_text(const std::string& text) {
  std::ifstream in(text);
  if (in && text.find(':') == std::string::npos) {
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  if (!in && text.size() > 5 && text.substr(text.size() - 5) == ".json") {
    throw DomainError("cannot read spec file '" + text + "'");
  }
  return text;
}

DomainSpec domain_arg(const std::string& text) { return parse_spec(read_spec_text(text)); }

Profile profile_arg(const std::string& text) {
  const DomainSpec s = domain_arg(text);
  if (s.op() != DomainSpec::Op::kConcaveToric) {
    throw DomainError("'" + text + "' is not a profile (expected power:P, pl:... or a profile JSON)");
  }
  return s.profile();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::int64_t parse_index(const std::string& s) {
  const double v = parse_double(s);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9e15) {
    throw DomainError("index '" + s + "' must be a non-negative integer");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> index_list(const std::string& text) {
  std::vector<std::int64_t> ks;
  for (const auto& part : split(text, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      ks.push_back(parse_index(part));
      continue;
    }
    const auto lo = parse_index(part.substr(0, dots));
    const auto hi = parse_index(part.substr(dots + 2));
    if (hi < lo) throw DomainError("empty index range '" + part + "'");
    if (hi - lo > 10000000) throw DomainError("index range '" + part + "' has more than 1e7 entries");
    for (auto k = lo; k <= hi; ++k) ks.push_back(k);
  }
  return ks;
}

struct GeometricSpec {
  double lo = 0.0, hi = 0.0;
  int per_decade = 0;
  std::vector<double> list;
};

GeometricSpec grid_spec(const std::string& text, int default_per_decade) {
  GeometricSpec g;
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    for (const auto& part : split(text, ',')) g.list.push_back(parse_double(part));
    return g;
  }
  std::string rest = text.substr(dots + 2);
  g.per_decade = default_per_decade;
  if (const auto slash = rest.find('/'); slash != std::string::npos) {
    const double n = parse_double(rest.substr(slash + 1));
    if (!(n >= 1.0) || n != std::floor(n) || n > 1000) throw DomainError("points per decade must be 1..1000");
    g.per_decade = static_cast<int>(n);
    rest = rest.substr(0, slash);
  }
  g.lo = parse_double(text.substr(0, dots));
  g.hi = parse_double(rest);
  if (!(g.lo > 0.0) || !(g.hi >= g.lo)) throw DomainError("grid '" + text + "' needs 0 < LO <= HI");
  return g;
}

std::vector<std::int64_t> k_grid(const std::string& text) {
  const auto g = grid_spec(text, 24);
  if (!g.list.empty()) {
    std::vector<std::int64_t> ks;
    for (double v : g.list) ks.push_back(parse_index(format_double(v)));
    return ks;
  }
  const auto lo = parse_index(format_double(g.lo));
  const auto hi = parse_index(format_double(g.hi));
  if (lo < 1) throw DomainError("k grid must start at k >= 1");
  return geometric_k_grid(lo, hi, g.per_decade);
}

std::vector<double> d_grid(const std::string& text) {
  const auto g = grid_spec(text, 16);
  std::vector<double> ds = g.list.empty() ? default_d_grid(g.lo, g.hi, g.per_decade) : g.list;
  for (double d : ds) {
    if (!(d > 0.0) || !std::isfinite(d)) throw DomainError("collar widths must be positive");
  }
  return ds;
}

// Flattens a JSON document into key,value rows (dotted paths, array indices).
void flatten(const json& j, const std::string& prefix, CsvTable& table) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, table);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), table);
  } else if (j.is_number_float()) {
    table.row({prefix, format_double(j.get<double>())});
  } else if (j.is_string()) {
    table.row({prefix, j.get<std::string>()});
  } else {
    table.row({prefix, j.dump()});
  }
}

std::string report_text(const json& doc, const std::string& format) {
  if (format == "json") return doc.dump(2) + "\n";
  CsvTable table({"key", "value"});
  flatten(doc, "", table);
  return table.str();
}

// Explicit --format wins; otherwise the command's preferred format.
const std::string& format_of(const Common& c) { return c.format.empty() ? c.fallback : c.format; }

void emit(const Common& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary);
  if (!file) throw DomainError("cannot open output file '" + c.out + "'");
  file << text;
  if (!file) throw DomainError("failed writing output file '" + c.out + "'");
}

void check_threads_env() {
  const char* env = std::getenv("ECH_LAB_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096) {
    throw DomainError(std::string("ECH_LAB_THREADS must be a positive integer, got '") + env + "'");
  }
}

CapacityOptions capacity_options(const Common& c, double tol) {
  if (!(tol > 0.0) || !(tol < 1.0)) throw DomainError("--tol must lie in (0, 1)");
  CapacityOptions opt;
  opt.tolerance = tol;
  opt.threads = c.threads;
  return opt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ech-lab: ECH capacities, subleading asymptotics, packing obstructions and folding checks",
               "ech-lab"};
  app.footer(kGrammar);
  app.require_subcommand(1);
  app.set_version_flag("--version", "ech-lab 0.1.0");

  std::function<void()> action;

  // caps
  Common caps_c;
  std::string caps_spec, caps_k = "0..10";
  double caps_tol = 0.05;
  auto* caps = app.add_subcommand("caps", "Capacity brackets c_k for a domain");
  caps->add_option("--spec,--profile", caps_spec, "Domain spec")->required();
  caps->add_option("--k,--kgrid", caps_k, "Indices, e.g. 0..10 or 1,10,100")->capture_default_str();
  caps->add_option("--tol", caps_tol, "Relative bracket tolerance against |e_k|")->capture_default_str();
  add_common(caps, caps_c, "csv");
  caps->callback([&] {
    action = [&] {
      const auto spec = domain_arg(caps_spec);
      const auto ks = index_list(caps_k);
      CapacitySolver solver(spec, capacity_options(caps_c, caps_tol));
      const auto br = solver.sequence(ks);
      emit(caps_c, format_of(caps_c) == "csv" ? to_csv(br).str() : json::parse(to_json(br)).dump(2) + "\n", out);
      for (const auto& b : br) {
        if (!b.converged && caps_c.strict) throw Unconverged{"c_" + std::to_string(b.k) + " unconverged"};
      }
    };
  });

  // weights
  Common w_c;
  std::string w_spec;
  std::int64_t w_count = 64;
  double w_min = 0.0;
  auto* weights = app.add_subcommand("weights", "Weight expansion of a concave toric domain");
  weights->add_option("--spec,--profile", w_spec, "Profile spec")->required();
  weights->add_option("--count", w_count, "Number of weights")->check(CLI::PositiveNumber)->capture_default_str();
  weights->add_option("--min-weight", w_min, "Stop below this weight")->check(CLI::NonNegativeNumber);
  add_common(weights, w_c, "csv");
  weights->callback([&] {
    action = [&] {
      const auto prof = profile_arg(w_spec);
      if (!prof.is_convex()) throw DomainError("weight expansion needs a convex profile");
      WeightEngine engine(prof);
      engine.expand(w_count, w_min);
      const auto ws = engine.snapshot(w_count);
      emit(w_c, format_of(w_c) == "csv" ? to_csv(ws).str() : json::parse(to_json(ws)).dump(2) + "\n", out);
    };
  });

  // ek
  Common ek_c;
  std::string ek_spec, ek_grid = "1e3..1e5";
  double ek_tol = 0.01;
  bool ek_fit = false;
  auto* ek = app.add_subcommand("ek", "Subleading terms e_k = c_k - sqrt(4 vol k) and growth fits");
  ek->add_option("--spec,--profile", ek_spec, "Domain spec")->required();
  ek->add_option("--kgrid,--k", ek_grid, "k grid, e.g. 1e3..1e5 or 1e3..1e5/12")->capture_default_str();
  ek->add_option("--tol", ek_tol, "Relative bracket tolerance")->capture_default_str();
  ek->add_flag("--fit", ek_fit, "Report the exponent fit instead of the series");
  add_common(ek, ek_c, "csv");
  ek->callback([&] {
    action = [&] {
      const auto spec = domain_arg(ek_spec);
      const auto ks = k_grid(ek_grid);
      CapacitySolver solver(spec, capacity_options(ek_c, ek_tol));
      const auto pts = subleading_series(solver, ks);
      if (ek_fit) {
        const KRange range{static_cast<double>(ks.front()), static_cast<double>(ks.back())};
        json doc = json::parse(to_json(fit_exponent(pts, range, BracketEdge::kMidpoint)));
        doc["interval"] = json::parse(to_json(certified_exponent(pts, range)));
        doc["ech_dimension"] = json::parse(to_json(ech_dimension(pts, range)));
        emit(ek_c, report_text(doc, ek_c.format.empty() ? "json" : ek_c.format), out);
      } else {
        emit(ek_c, format_of(ek_c) == "csv" ? to_csv(pts).str() : json::parse(to_json(pts)).dump(2) + "\n", out);
      }
      for (const auto& p : pts) {
        if (!p.converged && ek_c.strict) throw Unconverged{"e_" + std::to_string(p.k) + " unconverged"};
      }
    };
  });

  // cube-bound
  Common cb_c;
  std::string cb_spec, cb_k;
  int cb_level = 8;
  auto* cube = app.add_subcommand("cube-bound", "Dyadic cube packing and the resulting lower bound on e_k");
  cube->add_option("--spec,--profile", cb_spec, "Profile spec")->required();
  cube->add_option("--max-level", cb_level, "Finest cube level (side 2^-level), at most 8")
      ->check(CLI::Range(0, 8))
      ->capture_default_str();
  cube->add_option("--k,--kgrid", cb_k, "Evaluate the bound at these k (e.g. 100..200)");
  add_common(cube, cb_c, "csv");
  cube->callback([&] {
    action = [&] {
      const auto prof = profile_arg(cb_spec);
      const auto packing = dyadic_packing(prof, cb_level);
      json doc = json::parse(to_json(packing));
      CsvTable bounds({"k", "lower_bound"});
      if (!cb_k.empty()) {
        const double vol = prof.area();
        json arr = json::array();
        for (auto k : index_list(cb_k)) {
          const double lb = hutchings_lower_bound(packing, vol, k);
          arr.push_back({{"k", k}, {"lower_bound", lb}});
          bounds.row({CsvTable::cell(k), CsvTable::cell(lb)});
        }
        doc["bounds"] = arr;
      }
      if (format_of(cb_c) == "json") {
        emit(cb_c, doc.dump(2) + "\n", out);
      } else {
        emit(cb_c, cb_k.empty() ? to_csv(packing).str() : bounds.str(), out);
      }
    };
  });

  // decay
  Common d_c;
  std::string d_spec, d_grid_text = "1e-4..1e-2";
  bool d_folded = false, d_fit = false;
  double d_delta = 0.01;
  auto* decay = app.add_subcommand("decay", "Collar volumes V_d and the inner Minkowski dimension");
  decay->add_option("--spec,--profile", d_spec, "Profile spec")->required();
  decay->add_option("--dgrid", d_grid_text, "d grid, e.g. 1e-4..1e-2 or 1e-4..1e-2/8")->capture_default_str();
  decay->add_flag("--folded", d_folded, "Use the fibred folding domain instead of the toric domain");
  decay->add_option("--delta", d_delta, "Folding parameter delta (with --folded)")->capture_default_str();
  decay->add_flag("--fit", d_fit, "Report the dimension estimate instead of the series");
  add_common(decay, d_c, "csv");
  decay->callback([&] {
    action = [&] {
      const auto prof = profile_arg(d_spec);
      const auto ds = d_grid(d_grid_text);
      std::vector<DecaySample> samples;
      if (d_folded) {
        FoldingParams fp;
        fp.profile = prof;
        fp.delta = d_delta;
        samples = as_samples(folded_decay(fp, ds, d_c.threads));
      } else {
        samples = decay_samples(prof, ds, d_c.threads);
      }
      if (d_fit) {
        emit(d_c, report_text(json::parse(to_json(inner_dimension(samples))), d_c.format.empty() ? "json" : d_c.format),
             out);
      } else {
        emit(d_c, format_of(d_c) == "csv" ? to_csv(samples).str() : json::parse(to_json(samples)).dump(2) + "\n",
             out);
      }
    };
  });

  // pack
  Common p_c;
  std::string p_source, p_target;
  std::int64_t p_n = 0;
  std::int64_t p_cap = 1000000;
  double p_tol = 0.05;
  auto* pack = app.add_subcommand("pack", "Packing obstruction witness against a concave toric target");
  pack->add_option("--profile,--target", p_target, "Target profile")->required();
  auto* n_opt = pack->add_option("--n", p_n, "Number of equal balls (source lambda E(1,n))")
                    ->check(CLI::PositiveNumber);
  auto* s_opt = pack->add_option("--spec,--source", p_source, "Source shape at unit scale");
  n_opt->excludes(s_opt);
  pack->add_option("--k-cap", p_cap, "Largest k searched")->check(CLI::PositiveNumber)->capture_default_str();
  pack->add_option("--tol", p_tol, "Relative bracket tolerance")->capture_default_str();
  add_common(pack, p_c, "json");
  pack->callback([&] {
    action = [&] {
      const auto target = profile_arg(p_target);
      if (p_source.empty() && p_n == 0) throw DomainError("pack needs --n or --spec for the source");
      const auto opt = capacity_options(p_c, p_tol);
      const auto rep = p_source.empty()
                           ? obstruction_witness(p_n, target, p_cap, opt)
                           : generalized_obstruction(domain_arg(p_source), DomainSpec::concave_toric(target),
                                                     p_cap, opt);
      emit(p_c, report_text(json::parse(to_json(rep)), format_of(p_c)), out);
      if (rep.unconverged_skipped && p_c.strict) throw Unconverged{"unconverged brackets were skipped"};
    };
  });

  // fold
  Common f_c;
  std::string f_spec = "power:2";
  double f_delta = 0.01;
  std::optional<std::uint64_t> f_seed;
  std::int64_t f_samples = 10000;
  double f_tol = 1e-7;
  auto* fold = app.add_subcommand("fold", "Numerical checks of the folding embedding");
  fold->add_option("--spec,--profile", f_spec, "Power-law profile")->capture_default_str();
  fold->add_option("--delta", f_delta, "Folding parameter delta")->capture_default_str();
  fold->add_option("--seed", f_seed, "Random seed (required)")->required();
  fold->add_option("--samples", f_samples, "Jacobian samples; containment and injectivity use 10x")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  fold->add_option("--tol", f_tol, "Tolerance for the symplectic identity")->capture_default_str();
  add_common(fold, f_c, "json");
  fold->callback([&] {
    action = [&] {
      FoldingParams fp;
      fp.profile = profile_arg(f_spec);
      if (!fp.profile.is_power_law()) throw DomainError("fold needs a power-law profile");
      if (!(f_delta > 0.0)) throw DomainError("--delta must be positive");
      fp.delta = f_delta;
      const FoldingModel model(fp);
      FoldingCheckConfig cfg;
      cfg.jacobian_points = f_samples;
      cfg.containment_points = 10 * f_samples;
      cfg.injectivity_pairs = 10 * f_samples;
      cfg.seed = *f_seed;
      const auto rep = check_folding(model, cfg);
      json doc = json::parse(to_json(rep));
      doc["pass"] = rep.passes(f_tol);
      emit(f_c, report_text(doc, format_of(f_c)), out);
    };
  });

  // verify
  Common v_c;
  std::string v_criteria;
  std::uint64_t v_seed = VerifyOptions{}.seed;
  auto* verify = app.add_subcommand("verify", "Run the acceptance suite (criteria 1-10)");
  verify->add_option("--criteria", v_criteria, "Subset, e.g. 1,2,7 (default: all)");
  verify->add_option("--seed", v_seed, "Seed for randomized criteria")->capture_default_str();
  add_common(verify, v_c, "csv");
  int verify_status = kExitOk;
  verify->callback([&] {
    action = [&] {
      std::vector<int> ids;
      if (!v_criteria.empty()) {
        for (auto k : index_list(v_criteria)) {
          if (k < 1 || k > kCriterionCount) throw DomainError("criteria are numbered 1.." + std::to_string(kCriterionCount));
          ids.push_back(static_cast<int>(k));
        }
      }
      VerifyOptions opt;
      opt.seed = v_seed;
      opt.threads = v_c.threads;
      const auto results = run_acceptance(ids, opt);
      if (format_of(v_c) == "json") {
        emit(v_c, json::parse(to_json(results)).dump(2) + "\n", out);
      } else {
        CsvTable t({"id", "status", "name", "seconds", "detail"});
        for (const auto& r : results) {
          t.row({std::to_string(r.id), r.pass ? "PASS" : "FAIL", r.name, format_double(r.seconds), r.detail});
        }
        emit(v_c, t.str(), out);
      }
      if (std::any_of(results.begin(), results.end(), [](const auto& r) { return !r.pass; })) {
        verify_status = kExitInvalid;
      }
    };
  });

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();  // program name
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ech-lab: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    check_threads_env();
    if (action) action();
    return verify_status;
  } catch (const Unconverged& u) {
    err << "ech-lab: unconverged result under --strict: " << u.what << "\n";
    return kExitUnconverged;
  } catch (const LimitExceeded& e) {
    err << "ech-lab: resource limit: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InfiniteVolumeError& e) {
    err << "ech-lab: infinite volume: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const DomainError& e) {
    err << "ech-lab: invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "ech-lab: error: " << e.what() << "\n";
    return kExitInvalid;
  }
}

}  // namespace echlab::cli
