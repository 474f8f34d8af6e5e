#include "sdlab/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "sdlab/conformance.hpp"
#include "sdlab/serialize.hpp"
#include "sdlab/simulate.hpp"
#include "sdlab/spec_json.hpp"

#ifndef SDLAB_VERSION
#define SDLAB_VERSION "0.0.0"
#endif

namespace sdlab::cli {

namespace fs = std::filesystem;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t parse_count(const std::string& t) {
  auto caret = t.find('^');
  try {
    if (caret != std::string::npos) {
      const unsigned long long base = std::stoull(t.substr(0, caret));
      const int e = std::stoi(t.substr(caret + 1));
      if (base != 2 || e < 0 || e > 62) throw InputError("row sizes use 2^k with 0 <= k <= 62");
      return std::size_t{1} << e;
    }
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(t, &pos);
    if (pos != t.size()) throw InputError("bad row size '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw InputError("bad row size '" + t + "'");
  }
}

std::vector<double> parse_eps(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw InputError("bad epsilon '" + tok + "'");
    } catch (const std::logic_error&) {
      throw InputError("bad epsilon '" + tok + "'");
    }
  }
  if (out.empty()) throw InputError("empty epsilon list");
  return out;
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(tok);
  }
  return out;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Identifies a run by everything that determines its output.
std::string manifest_id(const std::string& command, const std::vector<std::string>& args) {
  std::string canon = std::string(SDLAB_VERSION) + '\n' + command;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if ((args[i] == "--out" || args[i] == "--threads") && i + 1 < args.size()) {
      ++i;
      continue;
    }
    if (args[i].rfind("--out=", 0) == 0 || args[i].rfind("--threads=", 0) == 0) continue;
    canon += '\n' + args[i];
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canon);
  return os.str();
}

void write_file(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + p.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_manifest(const fs::path& out, const std::string& command, const std::vector<std::string>& args,
                    const std::string& input, const std::vector<std::uint64_t>& seeds,
                    const std::vector<fs::path>& outputs) {
  json m;
  m["tool"] = "sdlab";
  m["version"] = SDLAB_VERSION;
  m["command"] = command;
  m["args"] = args;
  m["input"] = input;
  m["seeds"] = seeds;
  json outs = json::array();
  for (const auto& p : outputs) outs.push_back(fs::absolute(p).lexically_normal().string());
  m["outputs"] = outs;
  m["manifest_id"] = manifest_id(command, args);
  write_file(fs::path(out.string() + ".manifest.json"), m.dump(2) + "\n");
}

struct Input {
  std::string spec_path;
  std::string fixture;
  double p = 0.0;
  int nu = 1;
};

void add_input(CLI::App* cmd, Input& in) {
  auto* spec = cmd->add_option("--spec", in.spec_path, "JSON array specification");
  auto* fix = cmd->add_option("--fixture", in.fixture, "named fixture: example-2.1, example-4.1, wlln-counterexample, x2m-example");
  spec->excludes(fix);
  cmd->add_option("--p", in.p, "exponent p (fixtures: overrides the default)");
  cmd->add_option("--nu", in.nu, "number of log factors (example-4.1)");
}

LoadedSpec load_input(const Input& in) {
  if (!in.spec_path.empty()) return load_spec_file(in.spec_path);
  if (!in.fixture.empty()) {
    return spec_from_fixture(in.fixture, in.p > 0.0 ? std::optional<double>(in.p) : std::nullopt, in.nu);
  }
  throw InputError("one of --spec or --fixture is required");
}

std::string input_label(const Input& in) { return in.spec_path.empty() ? "fixture:" + in.fixture : in.spec_path; }

int emit(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return 0;
}

}  // namespace

std::vector<std::size_t> parse_rows(const std::string& text) {
  std::vector<std::size_t> rows;
  for (const std::string& tok : split(text)) {
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      rows.push_back(parse_count(tok));
      continue;
    }
    const std::size_t a = parse_count(tok.substr(0, dots));
    const std::size_t b = parse_count(tok.substr(dots + 2));
    if (a < 1 || b < a) throw InputError("bad row range '" + tok + "'");
    for (std::size_t n = a; n <= b; n *= 2) {
      rows.push_back(n);
      if (n > b / 2) break;
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  if (rows.empty() || rows.front() < 1) throw InputError("row sizes must be >= 1");
  return rows;
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.push_back("sdlab");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

int run(int argc, char** argv) {
  const std::vector<std::string> raw(argv + 1, argv + argc);
  CLI::App app{"Stochastic domination and laws of large numbers laboratory"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SDLAB_VERSION);

  // check
  Input check_in;
  std::string conditions;
  std::string check_out;
  std::size_t check_nsup = kDefaultScanRows;
  auto* check = app.add_subcommand("check", "evaluate conditions and write JSON verdicts");
  add_input(check, check_in);
  check->add_option("--conditions", conditions, "comma list: " + [] {
    std::string s;
    for (const auto& c : condition_names()) s += (s.empty() ? "" : ",") + c;
    return s;
  }())->required();
  check->add_option("--out", check_out, "output path (default stdout)");
  check->add_option("--n-sup", check_nsup, "row scan bound for suprema over n");

  // simulate
  Input sim_in;
  std::string mode = "wlln", rows_text = "2^6..2^16", eps_text = "0.1,0.5,1.0", sim_out, format = "csv",
              trunc_text = "none";
  std::size_t reps = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  double clamp_level = 1.0;
  bool center = false;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo partial-sum estimates");
  add_input(sim, sim_in);
  sim->add_option("--mode", mode, "wlln | slln-series | slln-path")->check(CLI::IsMember({"wlln", "slln-series", "slln-path"}));
  sim->add_option("--rows", rows_text, "row sizes, e.g. 2^6..2^14 or 64,128");
  sim->add_option("--reps", reps, "replications per row");
  sim->add_option("--eps", eps_text, "comma list of epsilon levels");
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--out", sim_out, "output path (default stdout)");
  sim->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sim->add_option("--threads", threads, "worker threads (0: all cores); never changes results");
  sim->add_option("--truncation", trunc_text, "none | symmetric-clamp | clamp-at-b | indicator-at-b");
  sim->add_option("--clamp-level", clamp_level, "level for symmetric-clamp");
  sim->add_flag("--center", center, "subtract E X 1(|X| <= b_n)");

  // verify-fixtures
  std::vector<std::string> only;
  std::vector<std::string> overrides;
  std::size_t verify_reps = 400;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify-fixtures", "run the fixture conformance suite");
  verify->add_option("--only", only, "restrict to these fixtures");
  verify->add_option("--expect", overrides, "override an expectation: fixture:key=value");
  verify->add_option("--reps", verify_reps, "replications for the WLLN simulations");
  verify->add_option("--out", verify_out, "JSON report path");
  verify->add_option("--threads", threads, "worker threads");

  // replay
  std::string manifest_path;
  bool verify_only = false;
  auto* replay = app.add_subcommand("replay", "rerun a manifest");
  replay->add_option("manifest", manifest_path, "manifest file")->required();
  replay->add_flag("--verify", verify_only, "rerun into a scratch directory and compare outputs bytewise");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      const LoadedSpec spec = load_input(check_in);
      json report;
      report["input"] = input_label(check_in);
      report["n_sup"] = check_nsup;
      report["manifest_id"] = manifest_id("check", raw);
      json results = json::array();
      bool all = true;
      for (const std::string& c : split(conditions)) {
        std::cerr << "[check] " << c << '\n';
        CheckOutcome o;
        try {
          o = run_check(spec, c, check_nsup);
        } catch (const std::invalid_argument& e) {
          throw InputError(e.what());
        }
        json r{{"condition", o.condition}, {"result", o.result}, {"matches", o.matches}, {"detail", o.detail}};
        if (o.expected) r["expected"] = *o.expected;
        results.push_back(r);
        all = all && o.matches;
        std::cerr << "[check] " << c << ": " << o.result << (o.expected ? " (expected " + *o.expected + ")" : "") << '\n';
      }
      report["results"] = results;
      report["all_match"] = all;
      emit(check_out, report.dump(2) + "\n");
      if (!check_out.empty()) write_manifest(check_out, "check", raw, input_label(check_in), {}, {check_out});
      return all ? 0 : 1;
    }

    if (sim->parsed()) {
      const LoadedSpec spec = load_input(sim_in);
      SimPlan plan;
      plan.array = spec.array;
      if (spec.weights.kind() == WeightScheme::Kind::c_normalized_sum ||
          spec.weights.kind() == WeightScheme::Kind::c_normalized_squares) {
        plan.weights = spec.weights;
      }
      plan.b = spec.b;
      plan.rows = parse_rows(rows_text);
      plan.reps = reps;
      plan.eps = parse_eps(eps_text);
      plan.seed = seed;
      plan.threads = threads;
      plan.clamp_level = clamp_level;
      plan.center = center;
      try {
        plan.truncation = truncation_from_string(trunc_text);
        plan.validate();
      } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
      }
      std::cerr << "[simulate] mode " << mode << ", " << plan.rows.size() << " rows, R = " << plan.reps << '\n';
      SimReport rep;
      if (mode == "wlln") {
        rep = wlln_estimate(plan);
      } else if (mode == "slln-series") {
        rep = slln_series_estimate(plan, spec.L, spec.p);
      } else {
        plan.b = NormalizingSequence::power_with(spec.p, spec.L.conjugate(), NormalizingSequence::ConjugateForm::inner);
        rep = slln_path_diagnostic(plan);
      }
      std::cerr << "[simulate] done\n";
      json j = to_json(rep);
      j["input"] = input_label(sim_in);
      j["manifest_id"] = manifest_id("simulate", raw);
      const std::string json_text = j.dump(2) + "\n";
      if (sim_out.empty()) return emit("", format == "csv" ? to_csv(rep) : json_text);
      std::vector<fs::path> outs{sim_out};
      if (format == "csv") {
        write_file(sim_out, to_csv(rep));
        fs::path side = fs::path(sim_out).replace_extension(".json");
        if (side == fs::path(sim_out)) side += ".json";
        write_file(side, json_text);
        outs.push_back(side);
      } else {
        write_file(sim_out, json_text);
      }
      write_manifest(sim_out, "simulate", raw, input_label(sim_in), {seed}, outs);
      return 0;
    }

    if (verify->parsed()) {
      ConformanceOptions opt;
      opt.wlln_reps = verify_reps;
      opt.threads = threads;
      for (const std::string& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos || o.find(':') == std::string::npos) throw InputError("--expect takes fixture:key=value");
        try {
          opt.overrides[o.substr(0, eq)] = std::stod(o.substr(eq + 1));
        } catch (const std::logic_error&) {
          throw InputError("bad --expect value in '" + o + "'");
        }
      }
      std::vector<std::string> names = only.empty() ? fixture_names() : only;
      for (const auto& n : names) {
        const auto all = fixture_names();
        if (std::find(all.begin(), all.end(), n) == all.end()) throw InputError("unknown fixture '" + n + "'");
      }
      json report = json::array();
      bool ok = true;
      for (const std::string& n : names) {
        std::cerr << "[verify] " << n << '\n';
        for (const ConformanceResult& r : verify_fixture(n, opt)) {
          std::cout << (r.passed ? "ok   " : "FAIL ") << r.fixture << " / " << r.check << ": " << r.detail << '\n';
          report.push_back({{"fixture", r.fixture}, {"check", r.check}, {"passed", r.passed}, {"detail", r.detail}});
          ok = ok && r.passed;
        }
      }
      if (!verify_out.empty()) write_file(verify_out, report.dump(2) + "\n");
      std::cout << (ok ? "all fixture checks passed" : "fixture checks FAILED") << '\n';
      return ok ? 0 : 1;
    }

    if (replay->parsed()) {
      json m;
      try {
        m = json::parse(read_file(manifest_path));
      } catch (const json::exception& e) {
        throw InputError(std::string("bad manifest: ") + e.what());
      }
      const std::string command = m.at("command").get<std::string>();
      std::vector<std::string> args = m.at("args").get<std::vector<std::string>>();
      if (m.value("version", "") != SDLAB_VERSION) {
        std::cerr << "[replay] manifest written by version " << m.value("version", "?") << ", running " << SDLAB_VERSION
                  << '\n';
      }
      if (!verify_only) return run(args);
      const std::vector<std::string> outputs = m.at("outputs").get<std::vector<std::string>>();
      if (outputs.empty()) throw InputError("manifest lists no outputs");
      const fs::path scratch = fs::temp_directory_path() / ("sdlab-replay-" + m.value("manifest_id", std::string("x")));
      fs::create_directories(scratch);
      const fs::path primary = outputs.front();
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--out" && i + 1 < args.size()) args[i + 1] = (scratch / primary.filename()).string();
        if (args[i].rfind("--out=", 0) == 0) args[i] = "--out=" + (scratch / primary.filename()).string();
      }
      const int code = run(args);
      if (code != 0) return code;
      bool same = true;
      for (const std::string& o : outputs) {
        const fs::path fresh = scratch / fs::path(o).filename();
        const bool eq = read_file(o) == read_file(fresh);
        std::cout << (eq ? "identical " : "DIFFERENT ") << o << '\n';
        same = same && eq;
      }
      fs::remove_all(scratch);
      return same ? 0 : 1;
    }
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace sdlab::cli
