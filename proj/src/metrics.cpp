// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <sstream>

#include "acam/errors.hpp"

namespace acam {

using Json = nlohmann::ordered_json;

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    t += at(c, c);
  }
  return t;
}

ConfusionMatrix confusion(std::span<const std::uint32_t> predicted, std::span<const std::uint16_t> labels,
                          std::uint32_t n_classes) {
  if (predicted.size() != labels.size()) {
    throw ValidationError("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                          std::to_string(labels.size()) + " labels");
  }
  ConfusionMatrix cm(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes || predicted[i] >= n_classes) {
      throw ValidationError("confusion: class index out of range at sample " + std::to_string(i));
    }
    ++cm.counts[std::size_t{labels[i]} * n_classes + predicted[i]];
    ++cm.n;
  }
  return cm;
}

ConfusionMatrix confusion(std::span<const ClassDecision> decisions, std::span<const std::uint16_t> labels,
                          std::uint32_t n_classes) {
  std::vector<std::uint32_t> predicted;
  predicted.reserve(decisions.size());
  for (const auto& d : decisions) {
    predicted.push_back(d.predicted);
  }
  return confusion(predicted, labels, n_classes);
}

Metrics metrics(const ConfusionMatrix& cm) {
  if (cm.n == 0 || cm.n_classes == 0) {
    throw ValidationError("metrics of an empty confusion matrix");
  }
  const std::uint32_t k = cm.n_classes;
  Metrics m;
  m.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.n);
  m.precision.resize(k);
  m.recall.resize(k);
  m.f1.resize(k);
  for (std::uint32_t c = 0; c < k; ++c) {
    std::uint64_t predicted = 0;
    std::uint64_t actual = 0;
    for (std::uint32_t o = 0; o < k; ++o) {
      predicted += cm.at(o, c);
      actual += cm.at(c, o);
    }
    const double tp = static_cast<double>(cm.at(c, c));
    m.precision[c] = predicted == 0 ? 0.0 : tp / static_cast<double>(predicted);
    m.recall[c] = actual == 0 ? 0.0 : tp / static_cast<double>(actual);
    const double denom = m.precision[c] + m.recall[c];
    m.f1[c] = denom == 0.0 ? 0.0 : 2.0 * m.precision[c] * m.recall[c] / denom;
  }
  auto mean = [k](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) {
      s += x;
    }
    return s / static_cast<double>(k);
  };
  m.macro_precision = mean(m.precision);
  m.macro_recall = mean(m.recall);
  m.macro_f1 = mean(m.f1);
  m.per_class_accuracy = m.recall;
  return m;
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
  std::ostringstream out;
  out << "true\\pred";
  for (std::uint32_t c = 0; c < cm.n_classes; ++c) {
    out << ',' << c;
  }
  out << '\n';
  for (std::uint32_t t = 0; t < cm.n_classes; ++t) {
    out << t;
    for (std::uint32_t p = 0; p < cm.n_classes; ++p) {
      out << ',' << cm.at(t, p);
    }
    out << '\n';
  }
  return out.str();
}

EvalReport run_eval(const FeatureMapSet& train, const FeatureMapSet& test, const TemplateGenParams& gen,
                    const MatchParams& match, std::span<const MatchMethod> methods) {
  if (train.n_features != test.n_features) {
    throw ValidationError("train and test feature widths differ");
  }
  if (test.n_classes > train.n_classes) {
    throw ValidationError("test set declares more classes than the training set");
  }
  if (test.n_samples() == 0) {
    throw ValidationError("test set is empty");
  }
  const auto generated = make_templates(train, gen);
  EvalReport report;
  report.gen = gen;
  report.match = match;
  report.n_train = train.n_samples();
  report.n_test = test.n_samples();
  report.n_templates = generated.bank.templates.size();
  report.selection = generated.selection;
  for (auto method : methods) {
    MatchParams p = match;
    p.method = method;
    const auto decisions = classify_batch(test, generated.bank, p);
    MethodResult r;
    r.method = method;
    r.confusion = confusion(decisions, test.labels, generated.bank.n_classes);
    r.metrics = metrics(r.confusion);
    r.ties = static_cast<std::size_t>(
        std::count_if(decisions.begin(), decisions.end(), [](const ClassDecision& d) { return d.tie; }));
    report.results.push_back(std::move(r));
  }
  return report;
}

EvalReport run_eval(const std::filesystem::path& train, const std::filesystem::path& test,
                    const TemplateGenParams& gen, const MatchParams& match, std::span<const MatchMethod> methods) {
  return run_eval(load_fmap(train), load_fmap(test), gen, match, methods);
}

std::string eval_report_to_text(const EvalReport& report) {
  Json doc;
  Json gen;
  gen["k"] = report.gen.k ? Json(*report.gen.k) : Json("auto");
  gen["mode"] = to_string(report.gen.mode);
  gen["threshold"] = to_string(report.gen.threshold_method);
  gen["window_rule"] = to_string(report.gen.window_rule);
  gen["gamma"] = report.gen.gamma;
  gen["seed"] = report.gen.seed;
  gen["max_iter"] = report.gen.kmeans.max_iter;
  gen["tol"] = report.gen.kmeans.tol;
  gen["auto_min_silhouette"] = report.gen.auto_min_silhouette;
  doc["generation"] = std::move(gen);
  doc["matching"] = {{"epsilon", report.match.epsilon}, {"alpha", report.match.alpha_sim}};
  doc["n_train"] = report.n_train;
  doc["n_test"] = report.n_test;
  doc["n_templates"] = report.n_templates;
  Json sel = Json::array();
  for (std::size_t c = 0; c < report.selection.size(); ++c) {
    const auto& s = report.selection[c];
    auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    sel.push_back({{"class_id", c}, {"k", s.k}, {"silhouette_k2", num(s.silhouette_k2)},
                   {"silhouette_k3", num(s.silhouette_k3)}});
  }
  doc["selection"] = std::move(sel);
  Json results = Json::array();
  for (const auto& r : report.results) {
    Json entry;
    entry["method"] = to_string(r.method);
    entry["accuracy"] = r.metrics.accuracy;
    entry["macro_precision"] = r.metrics.macro_precision;
    entry["macro_recall"] = r.metrics.macro_recall;
    entry["macro_f1"] = r.metrics.macro_f1;
    entry["per_class_accuracy"] = r.metrics.per_class_accuracy;
    entry["ties"] = r.ties;
    Json rows = Json::array();
    for (std::uint32_t t = 0; t < r.confusion.n_classes; ++t) {
      Json row = Json::array();
      for (std::uint32_t p = 0; p < r.confusion.n_classes; ++p) {
        row.push_back(r.confusion.at(t, p));
      }
      rows.push_back(std::move(row));
    }
    entry["confusion"] = std::move(rows);
    results.push_back(std::move(entry));
  }
  doc["results"] = std::move(results);
  return doc.dump(2) + "\n";
}

std::vector<SweepRow> sweep_templates(const FeatureMapSet& train, const FeatureMapSet& test,
                                      std::span<const std::size_t> ks, const TemplateGenParams& gen,
                                      const MatchParams& match) {
  std::vector<std::size_t> sorted(ks.begin(), ks.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.empty()) {
    throw ValidationError("sweep needs at least one k");
  }
  if (train.n_features != test.n_features) {
    throw ValidationError("train and test feature widths differ");
  }
  const auto thresholds = column_thresholds(train, gen.threshold_method);
  std::vector<SweepRow> rows;
  for (auto k : sorted) {
    TemplateGenParams p = gen;
    p.k = k;
    p.seed = gen.seed ^ k;
    const auto generated = make_templates(train, p, thresholds);
    const auto decisions = classify_batch(test, generated.bank, match);
    const auto cm = confusion(decisions, test.labels, generated.bank.n_classes);
    const auto m = metrics(cm);
    rows.push_back({k, m.accuracy, m.macro_f1, generated.bank.templates.size()});
  }
  return rows;
}

}  // namespace acam
