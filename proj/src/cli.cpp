// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <json.hpp>
#include <optional>
#include <ostream>
#include <sstream>

#include "acam/acam_model.hpp"
#include "acam/binarize.hpp"
#include "acam/cost_model.hpp"
#include "acam/errors.hpp"
#include "acam/io_util.hpp"
#include "acam/matcher.hpp"
#include "acam/metrics.hpp"
#include "acam/template_gen.hpp"

namespace acam {

namespace {

using Json = nlohmann::ordered_json;

/// Shortest decimal that round-trips to the same double.
std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::uint64_t parse_seed_env(const char* text) {
  std::uint64_t v = 0;
  const std::string s(text);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ValidationError("ACAM_EDGE_SEED='" + s + "' is not an unsigned integer");
  }
  return v;
}

std::optional<std::size_t> parse_k(const std::string& s) {
  if (s == "auto") {
    return std::nullopt;
  }
  if (s == "1" || s == "2" || s == "3") {
    return static_cast<std::size_t>(s[0] - '0');
  }
  throw ValidationError("--k must be auto, 1, 2 or 3 (got '" + s + "')");
}

std::vector<double> parse_sigma_sweep(const std::string& s) {
  std::vector<double> out;
  auto to_double = [&](const std::string& part) {
    try {
      std::size_t used = 0;
      const double v = std::stod(part, &used);
      if (used != part.size()) {
        throw std::invalid_argument(part);
      }
      return v;
    } catch (const std::exception&) {
      throw ValidationError("--sigma-sweep: '" + part + "' is not a number");
    }
  };
  if (s.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ':');) {
      parts.push_back(p);
    }
    if (parts.size() != 3) {
      throw ValidationError("--sigma-sweep expects start:step:stop");
    }
    const double start = to_double(parts[0]);
    const double step = to_double(parts[1]);
    const double stop = to_double(parts[2]);
    if (!(step > 0.0) || !(stop >= start) || !(start >= 0.0)) {
      throw ValidationError("--sigma-sweep needs 0 <= start <= stop and step > 0");
    }
    for (std::size_t i = 0;; ++i) {
      const double v = std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12;
      if (v > stop + 1e-12 || i > 100000) {
        break;
      }
      out.push_back(v);
    }
  } else {
    std::stringstream ss(s);
    for (std::string p; std::getline(ss, p, ',');) {
      out.push_back(to_double(p));
    }
  }
  for (double v : out) {
    if (!(v >= 0.0)) {
      throw ValidationError("--sigma-sweep values must be >= 0");
    }
  }
  if (out.empty()) {
    throw ValidationError("--sigma-sweep produced no values");
  }
  return out;
}

void emit(const std::string& payload, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << payload;
  } else {
    write_file_atomic(out_path, payload);
  }
}

struct GenFlags {
  std::string k = "1";
  std::string mode = "binary";
  std::string threshold = "mean";
  std::string window_rule = "stddev";
  double gamma = 1.0;
  double auto_min_silhouette = 0.05;
  std::size_t max_iter = 100;
  double tol = 1e-4;

  void attach(CLI::App* cmd) {
    cmd->add_option("--k", k, "Templates per class: auto|1|2|3")->capture_default_str();
    cmd->add_option("--mode", mode, "Template mode: binary|window")->capture_default_str();
    cmd->add_option("--threshold", threshold, "Binarization threshold: mean|median")->capture_default_str();
    cmd->add_option("--window-rule", window_rule, "Window bounds: stddev|minmax")->capture_default_str();
    cmd->add_option("--gamma", gamma, "Window half-width in standard deviations")->capture_default_str();
    cmd->add_option("--auto-min-silhouette", auto_min_silhouette, "AUTO keeps k=1 below this silhouette")
        ->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "k-means iteration cap")->capture_default_str();
    cmd->add_option("--tol", tol, "k-means centroid-shift tolerance")->capture_default_str();
  }

  [[nodiscard]] TemplateGenParams to_params(std::uint64_t seed, unsigned jobs) const {
    TemplateGenParams p;
    p.k = parse_k(k);
    p.mode = parse_template_mode(mode);
    p.threshold_method = parse_threshold_method(threshold);
    p.window_rule = parse_window_rule(window_rule);
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
      throw ValidationError("--gamma must be a finite number >= 0");
    }
    if (!(tol >= 0.0)) {
      throw ValidationError("--tol must be >= 0");
    }
    p.gamma = gamma;
    p.auto_min_silhouette = auto_min_silhouette;
    p.kmeans.max_iter = max_iter;
    p.kmeans.tol = tol;
    p.seed = seed;
    p.jobs = jobs;
    return p;
  }
};

struct MatchFlags {
  std::string method = "fc";
  double alpha = 1.0;
  double epsilon = 0.0;

  void attach(CLI::App* cmd, const std::string& method_help) {
    cmd->add_option("--method", method, method_help)->capture_default_str();
    cmd->add_option("--alpha", alpha, "Similarity distance-penalty scale")->capture_default_str();
    cmd->add_option("--epsilon", epsilon, "Feature-count tolerance")->capture_default_str();
  }

  [[nodiscard]] MatchParams to_params(unsigned jobs) const {
    MatchParams p;
    p.alpha_sim = alpha;
    p.epsilon = epsilon;
    p.jobs = jobs;
    p.validate();
    return p;
  }
};

std::string check_format(const std::string& f) {
  if (f != "json" && f != "csv") {
    throw ValidationError("--format must be json or csv");
  }
  return f;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Template-matching back-end classifier tools: thresholds, templates, matching, ACAM model, costs",
               "acam-edge"};
  app.require_subcommand(1);

  std::uint64_t seed = 42;
  unsigned jobs = 0;
  int verbosity = 0;
  auto* seed_opt = app.add_option("--seed", seed, "Seed for every random choice (env ACAM_EDGE_SEED)");
  app.add_option("--jobs", jobs, "Worker threads (0 = available parallelism)");
  app.add_flag("-v,--verbose", verbosity, "Progress messages on stderr");

  auto add_cmd = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->fallthrough();
    return cmd;
  };

  // thresholds
  std::string th_input, th_out, th_format = "csv";
  auto* th = add_cmd("thresholds", "Per-feature mean and median thresholds of a training set");
  th->add_option("--input", th_input, "Training FMAP file")->required();
  th->add_option("--out", th_out, "Output file (stdout when omitted)");
  th->add_option("--format", th_format, "csv|json")->capture_default_str();

  // templates
  std::string tp_input, tp_out;
  GenFlags tp_gen;
  auto* tp = add_cmd("templates", "Build a template bank from a training FMAP file");
  tp->add_option("--input", tp_input, "Training FMAP file")->required();
  tp->add_option("--out", tp_out, "Template bank output")->required();
  tp_gen.attach(tp);

  // classify
  std::string cl_bank, cl_input, cl_out, cl_format = "csv";
  MatchFlags cl_match;
  auto* cl = add_cmd("classify", "Classify every sample of an FMAP file against a bank");
  cl->add_option("--bank", cl_bank, "Template bank")->required();
  cl->add_option("--input", cl_input, "Query FMAP file")->required();
  cl->add_option("--out", cl_out, "Decision output (stdout when omitted)");
  cl->add_option("--format", cl_format, "csv|json")->capture_default_str();
  cl_match.attach(cl, "Matching rule: fc|sim");

  // eval
  std::string ev_train, ev_test, ev_out, ev_format = "json", ev_confusion;
  GenFlags ev_gen;
  MatchFlags ev_match;
  ev_match.method = "both";
  auto* ev = add_cmd("eval", "End-to-end: thresholds, templates, classification, metrics");
  ev->add_option("--train", ev_train, "Training FMAP file")->required();
  ev->add_option("--test", ev_test, "Test FMAP file")->required();
  ev->add_option("--out", ev_out, "Report output (stdout when omitted)");
  ev->add_option("--format", ev_format, "json|csv")->capture_default_str();
  ev->add_option("--confusion-out", ev_confusion, "Write confusion matrices to <prefix>_<method>.csv");
  ev_gen.attach(ev);
  ev_match.attach(ev, "Matching rule: fc|sim|both");

  // sweep
  std::string sw_train, sw_test, sw_out, sw_format = "csv";
  std::vector<std::size_t> sw_ks{1, 2, 3};
  GenFlags sw_gen;
  MatchFlags sw_match;
  auto* sw = add_cmd("sweep", "Accuracy versus templates per class");
  sw->add_option("--train", sw_train, "Training FMAP file")->required();
  sw->add_option("--test", sw_test, "Test FMAP file")->required();
  sw->add_option("--ks", sw_ks, "Comma-separated k values")->delimiter(',')->capture_default_str();
  sw->add_option("--out", sw_out, "Table output (stdout when omitted)");
  sw->add_option("--format", sw_format, "csv|json")->capture_default_str();
  sw_gen.attach(sw);
  sw_match.attach(sw, "Matching rule: fc|sim");

  // robustness
  std::string rb_bank, rb_input, rb_out, rb_format = "csv", rb_sweep = "0:0.05:0.3";
  std::size_t rb_seeds = 20;
  AcamConfig rb_cfg;
  auto* rb = add_cmd("robustness", "ACAM accuracy under Gaussian window perturbation");
  rb->add_option("--bank", rb_bank, "Template bank")->required();
  rb->add_option("--input", rb_input, "Query FMAP file")->required();
  rb->add_option("--sigma-sweep", rb_sweep, "start:step:stop or comma list, volts")->capture_default_str();
  rb->add_option("--seeds", rb_seeds, "Perturbation draws per sigma")->capture_default_str();
  rb->add_option("--vmin", rb_cfg.v_min, "Input voltage at the low end of the value range")->capture_default_str();
  rb->add_option("--vmax", rb_cfg.v_max, "Input voltage at the high end of the value range")->capture_default_str();
  rb->add_option("--theta", rb_cfg.sense_theta, "Sense threshold as a fraction of cells")->capture_default_str();
  rb->add_option("--margin", rb_cfg.window_margin, "Window widening on each side, volts")->capture_default_str();
  rb->add_option("--out", rb_out, "Curve output (stdout when omitted)");
  rb->add_option("--format", rb_format, "csv|json")->capture_default_str();

  // energy
  std::string en_arch, en_ref_arch, en_out, en_format = "json";
  std::optional<std::uint64_t> en_total, en_ref_total;
  std::optional<double> en_stated;
  EnergyInputs en;
  auto* enc = add_cmd("energy", "MAC and energy accounting for the hybrid classifier");
  enc->add_option("--arch", en_arch, "Front-end architecture descriptor");
  enc->add_option("--total-macs", en_total, "Front-end dense MAC total (instead of --arch)");
  enc->add_option("--sparsity", en.sparsity, "Fraction of pruned weights")->capture_default_str();
  enc->add_option("--removed", en.removed_ops, "Operations removed with the softmax layer")->capture_default_str();
  enc->add_option("--templates", en.n_templates, "Stored templates")->capture_default_str();
  enc->add_option("--features", en.n_features, "Features per template")->capture_default_str();
  enc->add_option("--ecell", en.e_cell, "Search energy per cell, joules")->capture_default_str();
  enc->add_option("--reference-arch", en_ref_arch, "Reference network descriptor");
  enc->add_option("--reference-macs", en_ref_total, "Reference network dense MAC total");
  enc->add_option("--stated-ratio", en_stated, "Externally quoted reduction ratio to compare against");
  enc->add_option("--e-mul", en.constants.e_mul, "Energy per multiply, constant units")->capture_default_str();
  enc->add_option("--e-add", en.constants.e_add, "Energy per add, constant units")->capture_default_str();
  enc->add_option("--e-mem", en.constants.e_mem, "Energy per memory access, constant units")->capture_default_str();
  enc->add_option("--mem-per-mac", en.constants.mem_accesses_per_mac, "Memory accesses charged per MAC")
      ->capture_default_str();
  enc->add_option("--joules-per-unit", en.constants.joules_per_unit, "Joules per constant unit")
      ->capture_default_str();
  enc->add_option("--unit-label", en.constants.unit_label, "Name of the constant unit")->capture_default_str();
  enc->add_option("--out", en_out, "Report output (stdout when omitted)");
  enc->add_option("--format", en_format, "json|csv")->capture_default_str();

  // synth
  std::uint32_t sy_classes = 10;
  std::size_t sy_features = 784, sy_per_class = 100, sy_centers = 1, sy_test_per_class = 0;
  double sy_spread = 0.05;
  std::string sy_out, sy_test_out;
  auto* sy = add_cmd("synth", "Write a deterministic synthetic feature-map fixture");
  sy->add_option("--classes", sy_classes, "Number of classes")->capture_default_str();
  sy->add_option("--features", sy_features, "Features per sample")->capture_default_str();
  sy->add_option("--per-class", sy_per_class, "Training samples per class")->capture_default_str();
  sy->add_option("--spread", sy_spread, "Bit-flip probability and noise scale")->capture_default_str();
  sy->add_option("--centers-per-class", sy_centers, "Distinct binary centers per class")->capture_default_str();
  sy->add_option("--out", sy_out, "Training FMAP output")->required();
  sy->add_option("--test-out", sy_test_out, "Optional test split drawn around the same centers");
  sy->add_option("--test-per-class", sy_test_per_class, "Test samples per class (default: --per-class)");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) {
    argv.push_back(a.c_str());
  }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }

  auto log = [&](const std::string& msg) {
    if (verbosity > 0) {
      err << msg << '\n';
    }
  };

  try {
    if (seed_opt->count() == 0) {
      if (const char* env = std::getenv("ACAM_EDGE_SEED"); env != nullptr) {
        seed = parse_seed_env(env);
      }
    }

    if (th->parsed()) {
      const auto format = check_format(th_format);
      const auto train = load_fmap(th_input);
      const auto mean = column_thresholds(train, ThresholdMethod::MEAN);
      const auto median = column_thresholds(train, ThresholdMethod::MEDIAN);
      std::ostringstream payload;
      if (format == "csv") {
        payload << "feature_index,mean,median\n";
        for (std::size_t j = 0; j < train.n_features; ++j) {
          payload << j << ',' << fmt(mean.values[j]) << ',' << fmt(median.values[j]) << '\n';
        }
      } else {
        Json doc;
        doc["mean"] = mean.values;
        doc["median"] = median.values;
        payload << doc.dump(2) << '\n';
      }
      emit(payload.str(), th_out, out);
      log("thresholds: " + std::to_string(train.n_features) + " features");
    } else if (tp->parsed()) {
      const auto params = tp_gen.to_params(seed, jobs);
      const auto train = load_fmap(tp_input);
      const auto result = make_templates(train, params);
      save_template_bank(result.bank, tp_out);
      log("templates: wrote " + std::to_string(result.bank.templates.size()) + " templates to " + tp_out);
    } else if (cl->parsed()) {
      const auto format = check_format(cl_format);
      auto params = cl_match.to_params(jobs);
      params.method = parse_match_method(cl_match.method);
      const auto bank = load_template_bank(cl_bank);
      const auto queries = load_fmap(cl_input);
      const auto decisions = classify_batch(queries, bank, params);
      std::ostringstream payload;
      if (format == "csv") {
        payload << "sample_index,true_label,predicted,tie";
        for (std::uint32_t c = 0; c < bank.n_classes; ++c) {
          payload << ",best_score_" << c;
        }
        payload << '\n';
        for (std::size_t i = 0; i < decisions.size(); ++i) {
          const auto& d = decisions[i];
          payload << i << ',' << queries.labels[i] << ',' << d.predicted << ',' << (d.tie ? 1 : 0);
          for (double s : d.per_class_best) {
            payload << ',' << fmt(s);
          }
          payload << '\n';
        }
      } else {
        Json rows = Json::array();
        for (std::size_t i = 0; i < decisions.size(); ++i) {
          const auto& d = decisions[i];
          rows.push_back({{"sample_index", i},
                          {"true_label", queries.labels[i]},
                          {"predicted", d.predicted},
                          {"tie", d.tie},
                          {"best_template", d.best_template},
                          {"per_class_best", d.per_class_best}});
        }
        payload << rows.dump(2) << '\n';
      }
      emit(payload.str(), cl_out, out);
      log("classify: " + std::to_string(decisions.size()) + " decisions");
    } else if (ev->parsed()) {
      const auto format = check_format(ev_format);
      const auto gen = ev_gen.to_params(seed, jobs);
      const auto match = ev_match.to_params(jobs);
      std::vector<MatchMethod> methods;
      if (ev_match.method == "both") {
        methods = {MatchMethod::FEATURE_COUNT, MatchMethod::SIMILARITY};
      } else {
        methods = {parse_match_method(ev_match.method)};
      }
      const auto report = run_eval(std::filesystem::path(ev_train), std::filesystem::path(ev_test), gen, match,
                                   methods);
      std::string payload;
      if (format == "json") {
        payload = eval_report_to_text(report);
      } else {
        std::ostringstream csv;
        csv << "method,accuracy,macro_precision,macro_recall,macro_f1,ties\n";
        for (const auto& r : report.results) {
          csv << to_string(r.method) << ',' << fmt(r.metrics.accuracy) << ',' << fmt(r.metrics.macro_precision) << ','
              << fmt(r.metrics.macro_recall) << ',' << fmt(r.metrics.macro_f1) << ',' << r.ties << '\n';
        }
        payload = csv.str();
      }
      if (!ev_confusion.empty()) {
        for (const auto& r : report.results) {
          write_file_atomic(ev_confusion + "_" + to_string(r.method) + ".csv", confusion_to_csv(r.confusion));
        }
      }
      emit(payload, ev_out, out);
      for (const auto& r : report.results) {
        log("eval: " + to_string(r.method) + " accuracy " + fmt(r.metrics.accuracy));
      }
    } else if (sw->parsed()) {
      const auto format = check_format(sw_format);
      const auto gen = sw_gen.to_params(seed, jobs);
      auto match = sw_match.to_params(jobs);
      match.method = parse_match_method(sw_match.method);
      for (auto k : sw_ks) {
        if (k < 1 || k > 3) {
          throw ValidationError("--ks values must be 1, 2 or 3");
        }
      }
      const auto train = load_fmap(sw_train);
      const auto test = load_fmap(sw_test);
      const auto rows = sweep_templates(train, test, sw_ks, gen, match);
      std::ostringstream payload;
      if (format == "csv") {
        payload << "k,accuracy,macro_f1,n_templates\n";
        for (const auto& r : rows) {
          payload << r.k << ',' << fmt(r.accuracy) << ',' << fmt(r.macro_f1) << ',' << r.n_templates << '\n';
        }
      } else {
        Json doc = Json::array();
        for (const auto& r : rows) {
          doc.push_back(
              {{"k", r.k}, {"accuracy", r.accuracy}, {"macro_f1", r.macro_f1}, {"n_templates", r.n_templates}});
        }
        payload << doc.dump(2) << '\n';
      }
      emit(payload.str(), sw_out, out);
    } else if (rb->parsed()) {
      const auto format = check_format(rb_format);
      const auto sigmas = parse_sigma_sweep(rb_sweep);
      if (rb_seeds == 0) {
        throw ValidationError("--seeds must be >= 1");
      }
      rb_cfg.seed = seed;
      rb_cfg.validate();
      const auto bank = load_template_bank(rb_bank);
      const auto test = load_fmap(rb_input);
      const auto curve = robustness_sweep(bank, test, rb_cfg, sigmas, rb_seeds, jobs);
      std::ostringstream payload;
      if (format == "csv") {
        payload << "sigma,mean_accuracy,std_accuracy,min_accuracy,max_accuracy,seeds\n";
        for (const auto& p : curve) {
          payload << fmt(p.sigma) << ',' << fmt(p.mean_accuracy) << ',' << fmt(p.std_accuracy) << ','
                  << fmt(p.min_accuracy) << ',' << fmt(p.max_accuracy) << ',' << p.seeds << '\n';
        }
      } else {
        Json doc = Json::array();
        for (const auto& p : curve) {
          doc.push_back({{"sigma", p.sigma},
                         {"mean_accuracy", p.mean_accuracy},
                         {"std_accuracy", p.std_accuracy},
                         {"min_accuracy", p.min_accuracy},
                         {"max_accuracy", p.max_accuracy},
                         {"seeds", p.seeds}});
        }
        payload << doc.dump(2) << '\n';
      }
      emit(payload.str(), rb_out, out);
    } else if (enc->parsed()) {
      const auto format = check_format(en_format);
      if (!en_arch.empty() && en_total) {
        throw ValidationError("give either --arch or --total-macs, not both");
      }
      if (!en_ref_arch.empty() && en_ref_total) {
        throw ValidationError("give either --reference-arch or --reference-macs, not both");
      }
      if (en_total) {
        en.total_macs = *en_total;
      } else if (!en_arch.empty()) {
        en.total_macs = arch_from_text(read_file_text(en_arch)).total_macs();
      }
      if (en_ref_total) {
        en.reference_macs = *en_ref_total;
      } else if (!en_ref_arch.empty()) {
        en.reference_macs = arch_from_text(read_file_text(en_ref_arch)).total_macs();
      }
      en.stated_ratio = en_stated;
      const auto report = energy_report(en);
      std::string payload;
      if (format == "json") {
        payload = report_to_text(report);
      } else {
        std::ostringstream csv;
        auto opt = [](const auto& v) { return v ? fmt(static_cast<double>(*v)) : std::string(); };
        csv << "field,value\n"
            << "total_macs," << report.total_macs << '\n'
            << "effective_macs," << report.effective_macs << '\n'
            << "removed_ops," << report.removed_ops << '\n'
            << "frontend_energy_j," << fmt(report.frontend_energy) << '\n'
            << "backend_energy_j," << fmt(report.backend_energy) << '\n'
            << "total_energy_j," << fmt(report.total_energy) << '\n'
            << "reference_energy_j," << opt(report.reference_energy) << '\n'
            << "reduction_ratio," << opt(report.reduction_ratio) << '\n'
            << "stated_ratio," << opt(report.stated_ratio) << '\n';
        payload = csv.str();
      }
      emit(payload, en_out, out);
    } else if (sy->parsed()) {
      const auto train = synth_fixture(sy_classes, sy_features, sy_per_class, sy_spread, seed, sy_centers, 0);
      std::optional<FeatureMapSet> test;
      if (!sy_test_out.empty()) {
        const std::size_t n = sy_test_per_class == 0 ? sy_per_class : sy_test_per_class;
        test = synth_fixture(sy_classes, sy_features, n, sy_spread, seed, sy_centers, 1);
      }
      save_fmap(train, sy_out);
      if (test) {
        save_fmap(*test, sy_test_out);
      }
      log("synth: wrote " + std::to_string(train.n_samples()) + " samples to " + sy_out);
    }
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace acam
