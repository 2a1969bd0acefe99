#include "graphon_ldp/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "graphon_ldp/eigen_ldp.h"
#include "graphon_ldp/error.h"
#include "graphon_ldp/families.h"
#include "graphon_ldp/io.h"
#include "graphon_ldp/rate.h"
#include "graphon_ldp/sampler.h"
#include "graphon_ldp/spectral.h"

namespace graphon_ldp {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kCommandNames[] = {"info", "rate", "sample", "ensemble",
                                         "psi",  "scaling", "approx"};

// Output-only key added to run.json; ignored when the file is read back.
constexpr const char* kResolvedKey = "resolved";

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json MatrixToJson(const SquareMatrix& a) {
  json rows = json::array();
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto row = a.row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

json ConstantsToJson(const ReferenceConstants& c) {
  return {{"c_r", c.c_r}, {"b_r", c.b_r}, {"k_r", c.k_r}};
}

[[noreturn]] void ConfigError(const std::string& what) { throw Error(ErrorCode::kConfig, what); }

template <typename T>
T ReadUnsigned(const json& v, const std::string& key) {
  if (!v.is_number_unsigned()) ConfigError("field '" + key + "' must be a nonnegative integer");
  return v.get<T>();
}

double ReadNumber(const json& v, const std::string& key) {
  if (!v.is_number()) ConfigError("field '" + key + "' must be a number");
  return v.get<double>();
}

std::vector<double> ReadNumberList(const json& v, const std::string& key) {
  if (!v.is_array()) ConfigError("field '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : v) out.push_back(ReadNumber(e, key));
  return out;
}

std::string ReadString(const json& v, const std::string& key) {
  if (!v.is_string()) ConfigError("field '" + key + "' must be a string");
  return v.get<std::string>();
}

bool ReadBool(const json& v, const std::string& key) {
  if (!v.is_boolean()) ConfigError("field '" + key + "' must be a boolean");
  return v.get<bool>();
}

// Writes via a temporary file in the same directory and renames it into place.
class OutputDir {
 public:
  explicit OutputDir(const std::string& path) : root_(path) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (ec || !fs::is_directory(root_)) {
      throw Error(ErrorCode::kIo, "cannot create output directory '" + path + "'");
    }
  }

  void Write(const std::string& name, const std::string& content) {
    const fs::path target = root_ / name;
    const fs::path tmp = root_ / ("." + name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      if (!out) throw Error(ErrorCode::kIo, "cannot write '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot rename into '" + target.string() + "'");
    written_.push_back(name);
  }

  const std::vector<std::string>& written() const { return written_; }

 private:
  fs::path root_;
  std::vector<std::string> written_;
};

Graphon SecondGraphon(const ExperimentConfig& config, const Graphon& r) {
  if (!config.h.empty()) return ResolveReference(config.h, config.m);
  if (config.command == Command::kApprox) {
    SquareMatrix f(r.m());
    for (std::size_t i = 0; i < r.m(); ++i) {
      for (std::size_t j = 0; j < r.m(); ++j) {
        const double v = r(i, j);
        f(i, j) = v + 0.1 * v * v * (1.0 - v);
      }
    }
    return Graphon(std::move(f));
  }
  return r;
}

PsiSolveOptions SolverOptions(const ExperimentConfig& config) {
  PsiSolveOptions options;
  options.seed = config.seed;
  options.use_delta_start = !config.no_delta_start;
  return options;
}

std::string RunInfo(const ExperimentConfig& config, const Graphon& r, OutputDir& out) {
  const ReferenceCheck check = CheckReference(r);
  json j = {{"ref", config.ref},
            {"m", r.m()},
            {"min", *std::min_element(r.values().data().begin(), r.values().data().end())},
            {"max", *std::max_element(r.values().data().begin(), r.values().data().end())},
            {"mean", MeanValue(r.values())},
            {"reference_ok", check.ok},
            {"rank_one", IsRankOne(r)}};
  if (check.ok) {
    j["l1_log_r"] = check.l1_log_r;
    j["l1_log_1mr"] = check.l1_log_1mr;
    try {
      j["constants"] = ConstantsToJson(ComputeConstants(r));
    } catch (const Error& e) {
      j["constants"] = nullptr;
      j["constants_error"] = e.what();
    }
  } else {
    j["operator_norm"] = OperatorNorm(r).value;
  }
  const std::string text = j.dump(2) + "\n";
  out.Write("info.json", text);
  return text;
}

std::string RunRate(const ExperimentConfig& config, const Graphon& r, OutputDir& out) {
  const Graphon h = SecondGraphon(config, r);
  const RateResult rate = RateI(h, r);
  json j = {{"value", rate.value}, {"m", r.m()}};
  if (config.verbose) j["per_cell"] = MatrixToJson(rate.per_cell);
  const std::string text = j.dump(2) + "\n";
  out.Write("rate.json", text);
  return text;
}

std::string RunSample(const ExperimentConfig& config, const Graphon& r, OutputDir& out) {
  std::ostringstream os;
  WriteGraph(os, Sample(config.n, r, config.seed));
  out.Write("graph.txt", os.str());
  return os.str();
}

std::string RunEnsembleCommand(const ExperimentConfig& config, const Graphon& r,
                               OutputDir& out) {
  SampleSpec spec;
  spec.n = config.n;
  spec.r = r;
  spec.seed = config.seed;
  spec.count = config.count;
  const EnsembleStats stats = RunEnsemble(spec, config.thresholds);

  std::string csv = "sample_index,seed,lambda_over_n\n";
  for (std::size_t i = 0; i < stats.samples.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(stats.seeds[i]) + "," +
           Num(stats.samples[i]) + "\n";
  }
  json tails = json::array();
  for (const auto& [threshold, count] : stats.tail_counts) {
    tails.push_back({{"threshold", threshold}, {"count", count}});
  }
  const json j = {{"n", config.n},     {"count", stats.samples.size()},
                  {"mean", stats.mean}, {"stddev", stats.stddev},
                  {"min", stats.min},   {"max", stats.max},
                  {"tail_counts", tails}};
  out.Write("ensemble.csv", csv);
  out.Write("ensemble_stats.json", j.dump(2) + "\n");
  return csv;
}

std::string RunPsi(const ExperimentConfig& config, const Graphon& r, OutputDir& out) {
  const ReferenceConstants constants = ComputeConstants(r);
  const SolverResult result = PsiSolve(r, config.beta, SolverOptions(config));
  json j = {{"beta", result.beta},
            {"m", r.m()},
            {"status", SolveStatusName(result.status)},
            {"constraint_residual", result.constraint_residual},
            {"multiplier", result.multiplier},
            {"start", result.start_name},
            {"constants", ConstantsToJson(constants)}};
  if (result.status == SolveStatus::kInfinite) {
    j["psi"] = nullptr;
    j["psi_infinite"] = true;
  } else {
    j["psi"] = result.psi;
    j["psi_infinite"] = false;
    j["h_opt"] = MatrixToJson(result.h_opt.values());
  }
  if (config.verbose) {
    json trace = json::array();
    for (const auto& t : result.trace) {
      trace.push_back({{"outer", t.outer},
                       {"iteration", t.iteration},
                       {"objective", t.objective},
                       {"residual", t.residual},
                       {"merit", t.merit}});
    }
    j["trace"] = trace;
  }
  const std::string text = j.dump(2) + "\n";
  out.Write("psi.json", text);
  if (result.status == SolveStatus::kNotConverged) {
    throw Error(ErrorCode::kNonConvergence,
                "psi solve did not reach the constraint: residual " +
                    Num(result.constraint_residual));
  }
  return text;
}

std::string RunScaling(const ExperimentConfig& config, const Graphon& r, OutputDir& out) {
  const ScalingReport report = ScalingExperiment(r, config.eps, SolverOptions(config));
  std::string csv = "eps,psi,ratio,minimizer_dir\n";
  json rows = json::array();
  bool all_ok = true;
  for (const auto& row : report.rows) {
    csv += Num(row.eps) + "," + Num(row.psi) + "," + Num(row.ratio) + "," +
           Num(row.minimizer_dir) + "\n";
    json jr = {{"eps", row.eps},
               {"status", SolveStatusName(row.status)},
               {"residual", row.residual}};
    if (!row.error.empty()) jr["error"] = row.error;
    all_ok = all_ok && row.status == SolveStatus::kConverged;
    rows.push_back(jr);
  }
  const json j = {{"constants", ConstantsToJson(report.constants)}, {"rows", rows}};
  out.Write("scaling.csv", csv);
  out.Write("scaling.json", j.dump(2) + "\n");
  if (!all_ok) {
    throw Error(ErrorCode::kNonConvergence, "one or more scaling rows did not converge");
  }
  return csv;
}

std::string RunApprox(const ExperimentConfig& config, const Graphon& r, OutputDir& out) {
  const Graphon f = SecondGraphon(config, r);
  const std::vector<double> errors = RateApproxConvergence(r, f, config.k_list);
  std::string csv = "k,abs_error\n";
  for (std::size_t i = 0; i < errors.size(); ++i) {
    csv += std::to_string(config.k_list[i]) + "," + Num(errors[i]) + "\n";
  }
  out.Write("approx.csv", csv);
  return csv;
}

json ErrorJson(const std::string& code, const std::string& message) {
  return {{"error", {{"code", code}, {"message", message}}}};
}

}  // namespace

std::string CommandName(Command command) {
  return kCommandNames[static_cast<int>(command)];
}

std::optional<Command> ParseCommand(const std::string& name) {
  for (int i = 0; i < 7; ++i) {
    if (name == kCommandNames[i]) return static_cast<Command>(i);
  }
  return std::nullopt;
}

json ToJson(const ExperimentConfig& c) {
  return {{"command", CommandName(c.command)},
          {"ref", c.ref},
          {"h", c.h},
          {"m", c.m},
          {"seed", c.seed},
          {"beta", c.beta},
          {"eps", c.eps},
          {"n", c.n},
          {"count", c.count},
          {"thresholds", c.thresholds},
          {"k_list", c.k_list},
          {"no_delta_start", c.no_delta_start},
          {"verbose", c.verbose},
          {"out_dir", c.out_dir}};
}

ExperimentConfig ConfigFromJson(const json& j) {
  if (!j.is_object()) ConfigError("config must be a JSON object");
  ExperimentConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "command") {
      const auto cmd = ParseCommand(ReadString(v, key));
      if (!cmd) ConfigError("unknown command '" + v.get<std::string>() + "'");
      c.command = *cmd;
    } else if (key == "ref") {
      c.ref = ReadString(v, key);
    } else if (key == "h") {
      c.h = ReadString(v, key);
    } else if (key == "m") {
      c.m = ReadUnsigned<std::size_t>(v, key);
    } else if (key == "seed") {
      c.seed = ReadUnsigned<std::uint64_t>(v, key);
    } else if (key == "beta") {
      c.beta = ReadNumber(v, key);
    } else if (key == "eps") {
      c.eps = ReadNumberList(v, key);
    } else if (key == "n") {
      c.n = ReadUnsigned<std::size_t>(v, key);
    } else if (key == "count") {
      c.count = ReadUnsigned<std::size_t>(v, key);
    } else if (key == "thresholds") {
      c.thresholds = ReadNumberList(v, key);
    } else if (key == "k_list") {
      if (!v.is_array()) ConfigError("field 'k_list' must be an array of integers");
      c.k_list.clear();
      for (const auto& e : v) c.k_list.push_back(ReadUnsigned<std::size_t>(e, key));
    } else if (key == "no_delta_start") {
      c.no_delta_start = ReadBool(v, key);
    } else if (key == "verbose") {
      c.verbose = ReadBool(v, key);
    } else if (key == "out_dir") {
      c.out_dir = ReadString(v, key);
    } else if (key == kResolvedKey) {
      // Written by Run for the record only.
    } else {
      ConfigError("unknown config field '" + key + "'");
    }
  }
  return c;
}

void ValidateConfig(const ExperimentConfig& c) {
  if (c.m == 0) ConfigError("m must be >= 1");
  if (c.out_dir.empty()) ConfigError("out_dir must not be empty");
  if (!std::isfinite(c.beta)) ConfigError("beta must be finite");
  for (double e : c.eps) {
    if (!std::isfinite(e) || e == 0.0) ConfigError("eps values must be finite and nonzero");
  }
  for (double t : c.thresholds) {
    if (!std::isfinite(t)) ConfigError("thresholds must be finite");
  }
  if ((c.command == Command::kSample || c.command == Command::kEnsemble) && c.n == 0) {
    ConfigError("n must be >= 1");
  }
  if (c.command == Command::kEnsemble && c.count == 0) ConfigError("count must be >= 1");
  if (c.command == Command::kApprox) {
    if (c.k_list.empty()) ConfigError("k_list must not be empty");
    for (std::size_t k : c.k_list) {
      if (k == 0 || c.m % k != 0) {
        ConfigError("k = " + std::to_string(k) + " does not divide m = " + std::to_string(c.m));
      }
    }
  }
  auto check_spec = [&](const std::string& spec, const char* field) {
    if (spec.empty() || IsBuiltinSpec(spec)) return;
    std::error_code ec;
    if (!fs::is_regular_file(spec, ec)) {
      ConfigError(std::string(field) + " file '" + spec + "' does not exist");
    }
  };
  check_spec(c.ref, "ref");
  check_spec(c.h, "h");
  try {
    ResolveReference(c.ref, c.m);
    if (!c.h.empty()) ResolveReference(c.h, c.m);
  } catch (const Error& e) {
    ConfigError(std::string("cannot resolve graphon: ") + e.what());
  }
}

RunOutcome Run(const ExperimentConfig& config) {
  RunOutcome outcome;
  std::unique_ptr<OutputDir> out;
  try {
    out = std::make_unique<OutputDir>(config.out_dir);
  } catch (const Error& e) {
    outcome.exit_code = 3;
    outcome.summary = ErrorJson(std::string(ErrorCodeName(e.code())), e.what()).dump(2) + "\n";
    return outcome;
  }

  json record = ToJson(config);
  try {
    ValidateConfig(config);
    const Graphon r = ResolveReference(config.ref, config.m);
    json resolved = {{"ref_m", r.m()}};
    if (config.command == Command::kEnsemble) {
      json seeds = json::array();
      for (std::size_t i = 0; i < config.count; ++i) seeds.push_back(config.seed + i);
      resolved["sample_seeds"] = seeds;
    }
    record[kResolvedKey] = resolved;
    out->Write("run.json", record.dump(2) + "\n");

    switch (config.command) {
      case Command::kInfo:
        outcome.summary = RunInfo(config, r, *out);
        break;
      case Command::kRate:
        outcome.summary = RunRate(config, r, *out);
        break;
      case Command::kSample:
        outcome.summary = RunSample(config, r, *out);
        break;
      case Command::kEnsemble:
        outcome.summary = RunEnsembleCommand(config, r, *out);
        break;
      case Command::kPsi:
        outcome.summary = RunPsi(config, r, *out);
        break;
      case Command::kScaling:
        outcome.summary = RunScaling(config, r, *out);
        break;
      case Command::kApprox:
        outcome.summary = RunApprox(config, r, *out);
        break;
    }
  } catch (const std::exception& e) {
    const Error* err = dynamic_cast<const Error*>(&e);
    const std::string code = err ? std::string(ErrorCodeName(err->code())) : "internal-error";
    outcome.exit_code = err && err->code() == ErrorCode::kConfig ? 2 : 1;
    outcome.summary = ErrorJson(code, e.what()).dump(2) + "\n";
    try {
      if (std::find(out->written().begin(), out->written().end(), "run.json") ==
          out->written().end()) {
        out->Write("run.json", record.dump(2) + "\n");
      }
      out->Write("error.json", outcome.summary);
    } catch (const Error&) {
    }
  }
  outcome.artifacts = out->written();
  return outcome;
}

}  // namespace graphon_ldp
