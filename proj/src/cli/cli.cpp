#include "qrst/cli.hpp"

#include <chrono>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "options.hpp"
#include "qrst/error.hpp"
#include "qrst/hopm.hpp"
#include "qrst/io.hpp"
#include "qrst/kernels.hpp"
#include "qrst/oracle.hpp"
#include "qrst/pqrst.hpp"
#include "qrst/qrst.hpp"

namespace qrst::cli {

namespace {

using nlohmann::json;

struct SolveFlags {
  std::string input;
  std::string method;
  bool unshifted = false;
  double delta = 1.0;
  double tol = 1e-13;
  std::string max_iter = "1000";
  std::optional<double> alpha;
  std::optional<std::string> restarts;
  std::string perm_cap = "720";
  std::string seed = "0";
  std::string threads = "1";
  std::string start = "uniform";
  std::optional<std::string> output;
  std::optional<std::string> trace;
};

struct GenerateFlags {
  std::string kind;
  std::string order = "3";
  std::string dim = "3";
  std::string seed = "0";
  std::optional<std::string> output;
};

struct ReproduceFlags {
  std::string example = "1";
  std::optional<std::string> input;
  std::optional<std::string> trace_dir;
  std::optional<std::string> report;
  std::string start = "uniform";
  std::string seed = "0";
  std::string starts = "5000";
  std::string threads = "1";
};

json config_json(const SolverConfig& c) {
  return {{"tol", c.tol},
          {"max_iter", c.max_iter},
          {"delta", c.delta},
          {"alpha", c.alpha},
          {"adaptive_target", c.adaptive_target},
          {"lambda_tol", c.lambda_tol},
          {"seed", c.seed},
          {"perm_cap", c.perm_cap},
          {"restarts", c.restarts},
          {"threads", c.threads},
          {"qr_sign", c.qr_sign == QrSign::Householder ? "householder" : "nonnegative-diagonal"},
          {"start_distribution", std::string(start_distribution_name(c.start))},
          {"residual_gate", c.spectra.residual_gate},
          {"stability_theta", c.spectra.stability_theta},
          {"dedup_lambda", c.spectra.dedup_lambda},
          {"dedup_vector", c.spectra.dedup_vector}};
}

json slice_diagnostics_json(const std::vector<SliceDiagnostic>& diags) {
  json out = json::array();
  for (const auto& d : diags) {
    out.push_back({{"permutation", io::format_permutation(d.permutation)},
                   {"slice", d.slice + 1},
                   {"status", std::string(slice_status_name(d.status))},
                   {"epsilon", std::isfinite(d.epsilon) ? json(d.epsilon) : json(nullptr)},
                   {"iterations", d.iterations},
                   {"message", d.message}});
  }
  return out;
}

json hopm_diagnostics_json(const std::vector<HopmOutcome>& runs) {
  json out = json::array();
  for (std::size_t r = 0; r < runs.size(); ++r) {
    if (runs[r].converged()) continue;
    out.push_back({{"run", r + 1},
                   {"status", std::string(hopm_status_name(runs[r].status))},
                   {"iterations", runs[r].iterations},
                   {"message", runs[r].message}});
  }
  return out;
}

int cmd_solve(const SolveFlags& f, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  const std::string tensor_text = io::read_file(f.input);
  const SymTensor a = io::parse_tensor_json(tensor_text);

  SolverConfig cfg;
  cfg.tol = f.tol;
  cfg.delta = f.delta;
  cfg.max_iter = parse_count("--max-iter", f.max_iter);
  cfg.perm_cap = parse_count("--perm-cap", f.perm_cap);
  cfg.seed = parse_count("--seed", f.seed);
  cfg.threads = parse_count("--threads", f.threads);
  cfg.start = parse_start_distribution(f.start);
  if (f.restarts) cfg.restarts = parse_count("--restarts", *f.restarts);
  const bool shifted = !f.unshifted;

  EigenSet set;
  std::string trace_text;
  std::size_t not_converged = 0;
  json diagnostics = json::array();
  OracleConfig ocfg;

  if (f.method == "qrst") {
    cfg.validate();
    QrstResult r = qrst_all(a, cfg, shifted);
    set = std::move(r.set);
    trace_text = io::qrst_trace_csv(r.outcomes);
    not_converged = r.diagnostics.size();
    diagnostics = slice_diagnostics_json(r.diagnostics);
  } else if (f.method == "pqrst") {
    cfg.validate();
    PqrstResult r = pqrst(a, cfg, shifted);
    set = std::move(r.set);
    trace_text = io::pqrst_trace_csv(r.runs);
    not_converged = r.diagnostics.size();
    diagnostics = slice_diagnostics_json(r.diagnostics);
  } else if (f.method == "shopm" || f.method == "sshopm" || f.method == "sshopm-adaptive") {
    if (f.method == "shopm") {
      if (f.alpha && *f.alpha != 0.0) throw InputError("--alpha is not used by shopm (unshifted); use sshopm");
      cfg.alpha = 0.0;
    } else if (f.method == "sshopm") {
      cfg.alpha = f.alpha ? *f.alpha : conservative_shift(a);
    }
    cfg.validate();
    MultistartResult r =
        sshopm_multistart(a, cfg, f.method == "sshopm-adaptive" ? HopmShift::Adaptive : HopmShift::Fixed);
    set = std::move(r.set);
    trace_text = io::hopm_trace_csv(r.runs);
    not_converged = r.runs.size() - r.converged;
    diagnostics = hopm_diagnostics_json(r.runs);
  } else if (f.method == "oracle") {
    ocfg.seed = cfg.seed;
    ocfg.threads = cfg.threads;
    if (f.restarts) ocfg.n_starts = cfg.restarts;
    ocfg.spectra = cfg.spectra;
    set = enumerate_eigenpairs(a, ocfg);
    if (f.trace) err << "note: --trace is ignored by the oracle\n";
  } else {
    throw InputError("--method must be one of qrst, pqrst, shopm, sshopm, sshopm-adaptive, oracle");
  }

  std::vector<std::string> outputs;
  if (f.output) {
    io::write_eigenpairs(*f.output, set, a.dim());
    outputs.push_back(*f.output);
  } else {
    out << io::eigenpairs_csv(set, a.dim());
  }
  if (f.trace && f.method != "oracle") {
    io::write_file(*f.trace, trace_text);
    outputs.push_back(*f.trace);
  }

  double max_residual = 0.0;
  for (const auto& p : set.pairs) max_residual = std::max(max_residual, p.residual);
  std::ostream& summary = f.output ? out : err;
  summary << "method " << f.method << ": " << set.size() << " distinct pairs, max residual "
          << io::format_double(max_residual) << ", " << not_converged << " not converged\n";

  if (f.output) {
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    json manifest = {{"solver", f.method},
                     {"shifted", shifted},
                     {"config", config_json(cfg)},
                     {"input", {{"path", f.input}, {"sha256", io::sha256_hex(tensor_text)}}},
                     {"outputs", outputs},
                     {"kernels", std::string(kernels::backend_name(kernels::active_backend()))},
                     {"duration_seconds", seconds},
                     {"diagnostics", diagnostics}};
    if (f.method == "oracle") {
      manifest["oracle"] = {{"n_starts", ocfg.n_starts},
                            {"refine_tol", ocfg.refine_tol},
                            {"max_refine", ocfg.max_refine},
                            {"seed", ocfg.seed}};
    }
    io::write_file(*f.output + ".manifest.json", manifest.dump(2) + "\n");
  }
  return set.empty() ? kExitNoPairs : kExitOk;
}

int cmd_generate(const GenerateFlags& f, std::ostream& out) {
  const std::size_t order = parse_count("--order", f.order);
  const std::size_t dim = parse_count("--dim", f.dim);
  const std::uint64_t seed = parse_count("--seed", f.seed);
  SymTensor t = [&] {
    if (f.kind == "labeling") return labeling_tensor(order, dim);
    if (f.kind == "random") return random_symmetric(order, dim, seed);
    if (f.kind == "identity") return identity_tensor(order, dim);
    throw InputError("--kind must be labeling, random or identity");
  }();
  if (f.output) {
    io::save_tensor(*f.output, t);
  } else {
    out << io::tensor_to_json(t);
  }
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Real Z-eigenpairs of symmetric tensors: QR iterations, power methods and a multistart oracle"};
  app.require_subcommand(1);
  std::optional<std::string> backend;
  app.add_option("--kernels", backend, "Kernel backend: scalar, avx2 or neon (default: best available)");

  SolveFlags sf;
  CLI::App* solve = app.add_subcommand("solve", "Compute eigenpairs of a tensor file");
  solve->add_option("--input", sf.input, "Tensor JSON file")->required();
  solve->add_option("--method", sf.method, "qrst | pqrst | shopm | sshopm | sshopm-adaptive | oracle")->required();
  solve->add_flag("--unshifted{true},--shifted{false}", sf.unshifted, "Shift the QR slices (default: shifted)");
  solve->add_option("--delta", sf.delta, "Slice shift margin")->capture_default_str();
  solve->add_option("--tol", sf.tol, "QR convergence tolerance")->capture_default_str();
  solve->add_option("--max-iter", sf.max_iter, "Iteration limit per run")->capture_default_str();
  solve->add_option("--alpha", sf.alpha, "Fixed power-method shift (sshopm default: conservative shift)");
  solve->add_option("--restarts", sf.restarts, "Power-method restarts (default 100) or oracle starts (default 5000)");
  solve->add_option("--perm-cap", sf.perm_cap, "Largest number of permutations for pqrst")->capture_default_str();
  solve->add_option("--seed", sf.seed, "Random seed")->capture_default_str();
  solve->add_option("--threads", sf.threads, "Worker threads")->capture_default_str();
  solve->add_option("--start-dist", sf.start, "Power-method starts: uniform, sphere or uniform-symmetric")
      ->capture_default_str();
  solve->add_option("--output", sf.output, "Eigenpair table (.csv or .json); stdout when omitted");
  solve->add_option("--trace", sf.trace, "Per-iteration trace CSV");

  GenerateFlags gf;
  CLI::App* generate = app.add_subcommand("generate", "Write a tensor file");
  generate->add_option("--kind", gf.kind, "labeling | random | identity")->required();
  generate->add_option("--order", gf.order, "Tensor order d")->capture_default_str();
  generate->add_option("--dim", gf.dim, "Tensor dimension n")->capture_default_str();
  generate->add_option("--seed", gf.seed, "Seed for --kind random")->capture_default_str();
  generate->add_option("--output", gf.output, "Output path; stdout when omitted");

  ReproduceFlags rf;
  CLI::App* repro = app.add_subcommand("reproduce", "Rerun a worked example and compare to its published values");
  repro->add_option("--example", rf.example, "1 (labeling tensor), 2, 3 (need --input) or 4 (random S[3,6])")
      ->capture_default_str();
  repro->add_option("--input", rf.input, "Tensor file for examples 2 and 3");
  repro->add_option("--trace-dir", rf.trace_dir, "Directory for per-solver trace CSVs");
  repro->add_option("--report", rf.report, "Also write the report to this file");
  repro->add_option("--start-dist", rf.start, "Power-method starts: uniform, sphere or uniform-symmetric")
      ->capture_default_str();
  repro->add_option("--seed", rf.seed, "Random seed")->capture_default_str();
  repro->add_option("--oracle-starts", rf.starts, "Oracle start count")->capture_default_str();
  repro->add_option("--threads", rf.threads, "Worker threads")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (backend) kernels::set_backend(kernels::parse_backend(*backend));
    if (solve->parsed()) return cmd_solve(sf, out, err);
    if (generate->parsed()) return cmd_generate(gf, out);
    ReproduceOptions ro;
    ro.example = static_cast<int>(parse_count("--example", rf.example));
    if (rf.input) ro.input = *rf.input;
    if (rf.trace_dir) ro.trace_dir = *rf.trace_dir;
    if (rf.report) ro.report = *rf.report;
    ro.start = parse_start_distribution(rf.start);
    ro.seed = parse_count("--seed", rf.seed);
    ro.oracle_starts = parse_count("--oracle-starts", rf.starts);
    ro.threads = parse_count("--threads", rf.threads);
    return reproduce(ro, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
}

}  // namespace qrst::cli
