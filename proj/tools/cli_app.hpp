#pragma once

// Command-line front end. `run` takes the argument list and two streams so
// tests can drive it in-process; main() only forwards argv.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "successodds.hpp"

namespace successodds::cli {

struct Options {
  std::string format = "text";
  int digits = 3;
  double alpha = 0.05;
  std::size_t reps = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  std::string input;
  std::string dist;
  std::string value_col = "value";
  std::string group_col = "group";
  std::string stratum_col = "stratum";
  std::string scale;
  bool skip_blank_rows = false;
  std::vector<std::string> groups;

  std::string alternative = "two_sided";
  std::string criterion = "theta";
  std::string weighting = "unweighted";

  std::string q_a;
  std::string q_b;
  std::string svg;

  std::vector<int> tables;
  std::vector<std::string> examples;

  double level() const { return 1.0 - alpha; }
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::usage, "cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::usage, "cannot write '" + path + "'");
  out << content;
  if (!out.flush()) fail(ErrorCode::usage, "cannot write '" + path + "'");
}

inline void validate(const Options& o) {
  if (!(o.alpha > 0.0 && o.alpha < 1.0)) fail(ErrorCode::usage, "--alpha must lie in (0, 1)");
  if (o.reps < 100) fail(ErrorCode::usage, "--reps must be at least 100");
  if (o.digits < 0 || o.digits > 9) fail(ErrorCode::usage, "--digits must lie in 0..9");
  parse_report_format(o.format);
}

inline Dataset load_dataset(const Options& o, bool with_strata) {
  if (o.input.empty()) fail(ErrorCode::usage, "--input is required");
  const std::string text = read_file(o.input);
  CsvConfig config;
  config.value_column = o.value_col;
  config.group_column = o.group_col;
  if (with_strata) config.stratum_column = o.stratum_col;
  config.skip_blank_rows = o.skip_blank_rows;
  config.scale = o.scale.empty() ? infer_numeric_scale(text, o.value_col) : Scale::parse(o.scale);
  return parse_csv(std::string_view(text), config);
}

inline std::vector<DiscreteDistribution> load_distributions(const Options& o) {
  return parse_distribution_spec(read_file(o.dist));
}

/// The two groups to compare: --groups A,B or the first two present.
inline std::pair<std::string, std::string> pick_two(const std::vector<std::string>& available,
                                                    const std::vector<std::string>& requested) {
  if (requested.empty()) {
    if (available.size() < 2) fail(ErrorCode::usage, "need at least two groups");
    return {available[0], available[1]};
  }
  if (requested.size() != 2) fail(ErrorCode::usage, "--groups takes exactly two labels");
  for (const auto& g : requested) {
    if (std::find(available.begin(), available.end(), g) == available.end()) {
      fail(ErrorCode::usage, "unknown group '" + g + "'");
    }
  }
  return {requested[0], requested[1]};
}

inline const DiscreteDistribution& find_distribution(const std::vector<DiscreteDistribution>& ds,
                                                     const std::string& label) {
  for (const auto& d : ds) {
    if (d.label() == label) return d;
  }
  fail(ErrorCode::usage, "unknown group '" + label + "'");
}

inline std::vector<std::string> labels_of(const std::vector<DiscreteDistribution>& ds) {
  std::vector<std::string> out;
  for (const auto& d : ds) out.push_back(d.label());
  return out;
}

inline Alternative parse_alternative(const std::string& s) {
  if (s == "two_sided") return Alternative::two_sided;
  if (s == "greater") return Alternative::greater;
  if (s == "less") return Alternative::less;
  fail(ErrorCode::usage, "unknown alternative '" + s + "'");
}

inline const std::vector<std::string>& effect_columns() {
  static const std::vector<std::string> columns{"Comparison", "p0", "θ", "λ_SO", "λ_WR"};
  return columns;
}

inline std::vector<Cell> effect_row(const std::string& label, const EffectEstimates& e) {
  return {label, e.p_zero, e.theta, e.lambda_so, e.lambda_wr};
}

inline std::string arrow_path(const std::vector<std::string>& cycle) {
  std::string s;
  for (const auto& v : cycle) s += v + " → ";
  return s + cycle.front();
}

// ---------------------------------------------------------------------------

inline Report effects_command(const Options& o) {
  Report report;
  report.data["command"] = "effects";
  EffectEstimates e;
  std::string a;
  std::string b;
  if (!o.dist.empty()) {
    if (!o.input.empty()) fail(ErrorCode::usage, "use either --input or --dist, not both");
    auto ds = load_distributions(o);
    std::tie(a, b) = pick_two(labels_of(ds), o.groups);
    e = effects_from_distributions(find_distribution(ds, a), find_distribution(ds, b));
  } else {
    Dataset data = load_dataset(o, false);
    std::tie(a, b) = pick_two(data.groups(), o.groups);
    Sample sa = data.sample(a);
    Sample sb = data.sample(b);
    PairCounts c = count_pairs_fast(sa, sb);
    report.data["n"] = Json{{a, sa.size()}, {b, sb.size()}};
    report.data["counts"] = to_json(c);
    e = effects_from_counts(c);
  }
  report.data["comparison"] = Json{{"a", a}, {"b", b}};
  report.data["effects"] = to_json(e);
  report.tables.push_back({"", effect_columns(), {effect_row(a + ", " + b, e)}});
  return report;
}

struct TestOutcome {
  Report report;
  std::optional<std::string> degenerate;
};

inline TestOutcome test_command(const Options& o) {
  Dataset data = load_dataset(o, false);
  auto [a, b] = pick_two(data.groups(), o.groups);
  Sample sa = data.sample(a);
  Sample sb = data.sample(b);
  const double level = o.level();

  TestOutcome outcome;
  Report& report = outcome.report;
  report.data["command"] = "test";
  report.data["comparison"] = Json{{"a", a}, {"b", b}};
  report.data["effects"] = to_json(sample_effects(sa, sb));

  TestResult t = brunner_munzel(sa, sb, parse_alternative(o.alternative));
  report.data["test"] = to_json(t);
  if (t.degenerate) outcome.degenerate = "test statistic undefined: " + t.degenerate_reason;
  report.tables.push_back({"Brunner-Munzel test",
                           {"n_A", "n_B", "θ", "T", "df", "p"},
                           {{std::to_string(t.n1), std::to_string(t.n2), t.theta_exact,
                             t.statistic ? Cell(*t.statistic) : Cell(std::string("–")),
                             t.degenerate ? Cell(std::string("–")) : Cell(t.df),
                             t.p_value ? Cell(*t.p_value) : Cell(std::string("–"))}}});

  Json intervals = Json::object();
  Table ci_table{"Confidence intervals (level " + format_trimmed(from_double(level), 6) + ")",
                 {"Parameter", "Method", "Estimate", "Lower", "Upper"},
                 {}};
  auto add = [&](const ConfidenceInterval& ci) {
    ci_table.rows.push_back({std::string(interval_scale_name(ci.scale)), std::string(interval_method_name(ci.method)),
                             ci.estimate, ci.lower, ci.upper});
  };
  auto guarded = [&](const char* key, auto&& compute) {
    try {
      compute();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::degenerate) throw;
      intervals[key] = nullptr;
      if (!outcome.degenerate) outcome.degenerate = e.what();
    }
  };
  guarded("theta", [&] {
    auto ci = ci_theta_logit(t, level);
    intervals["theta"] = to_json(ci);
    add(ci);
  });
  guarded("lambda_so", [&] {
    auto ci = ci_lambda_so(t, level);
    intervals["lambda_so"] = to_json(ci);
    add(ci);
  });
  guarded("lambda_wr", [&] {
    BootstrapOptions bo;
    bo.level = level;
    bo.reps = o.reps;
    bo.seed = o.seed;
    bo.threads = o.threads;
    auto boot = ci_lambda_wr_bootstrap(sa, sb, bo);
    intervals["lambda_wr"] = to_json(boot, o.seed);
    add(boot.interval);
    report.notes.push_back("win ratio bootstrap: " + std::to_string(boot.reps) + " replicates, seed " +
                           std::to_string(o.seed) + ", " + std::to_string(boot.infinite_replicates) + " infinite, " +
                           std::to_string(boot.undefined_replicates) + " undefined");
  });
  report.data["intervals"] = std::move(intervals);
  if (!ci_table.rows.empty()) report.tables.push_back(std::move(ci_table));
  if (outcome.degenerate) report.notes.push_back("degenerate: " + *outcome.degenerate);
  return outcome;
}

template <typename G>
Report pairwise_report(const std::vector<G>& groups, DominanceCriterion criterion) {
  Report report;
  report.data["command"] = "pairwise";
  report.data["criterion"] = criterion == DominanceCriterion::theta ? "theta" : "win_ratio";
  PairwiseMatrix m = pairwise_effects(groups);
  TournamentReport t = detect_cycles(m, criterion);
  report.data["matrix"] = to_json(m);
  report.data["tournament"] = to_json(t);

  Table pairs{"Pairwise comparisons", effect_columns(), {}};
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      pairs.rows.push_back(effect_row(m.labels()[i] + ", " + m.labels()[j], m.cell(i, j)));
    }
  }
  report.tables.push_back(std::move(pairs));

  auto mixture = mixture_reference_effects(groups);
  Json mix = Json::array();
  Table mix_table{"Each group against the mixture of all groups", effect_columns(), {}};
  for (std::size_t i = 0; i < groups.size(); ++i) {
    mix.push_back(Json{{"group", m.labels()[i]}, {"effects", to_json(mixture[i])}});
    mix_table.rows.push_back(effect_row(m.labels()[i] + ", mixture", mixture[i]));
  }
  report.data["mixture_reference"] = std::move(mix);
  report.tables.push_back(std::move(mix_table));

  if (t.transitive) {
    report.notes.push_back("no dominance cycle");
  } else {
    for (const auto& c : t.cycle_labels()) report.notes.push_back("dominance cycle: " + arrow_path(c));
  }
  return report;
}

inline Report pairwise_command(const Options& o) {
  DominanceCriterion criterion = DominanceCriterion::theta;
  if (o.criterion == "win_ratio") {
    criterion = DominanceCriterion::win_ratio;
  } else if (o.criterion != "theta") {
    fail(ErrorCode::usage, "unknown criterion '" + o.criterion + "' (theta, win_ratio)");
  }
  auto keep = [&](const std::string& label) {
    return o.groups.empty() || std::find(o.groups.begin(), o.groups.end(), label) != o.groups.end();
  };
  if (!o.dist.empty()) {
    if (!o.input.empty()) fail(ErrorCode::usage, "use either --input or --dist, not both");
    std::vector<DiscreteDistribution> ds;
    for (auto& d : load_distributions(o)) {
      if (keep(d.label())) ds.push_back(std::move(d));
    }
    return pairwise_report(ds, criterion);
  }
  Dataset data = load_dataset(o, false);
  std::vector<Sample> samples;
  for (const auto& g : data.groups()) {
    if (keep(g)) samples.push_back(data.sample(g));
  }
  return pairwise_report(samples, criterion);
}

inline Report stratified_command(const Options& o) {
  StratumWeighting weighting = StratumWeighting::unweighted;
  if (o.weighting == "sample_size") {
    weighting = StratumWeighting::sample_size;
  } else if (o.weighting != "unweighted") {
    fail(ErrorCode::usage, "unknown weighting '" + o.weighting + "' (unweighted, sample_size)");
  }
  Dataset data = load_dataset(o, true);
  auto [a, b] = pick_two(data.groups(), o.groups);
  std::vector<Stratum<Sample>> strata;
  for (const auto& s : data.strata()) strata.push_back({s, data.sample(a, s), data.sample(b, s)});
  StratifiedSummary summary = stratified_summary(strata, weighting);

  Report report;
  report.data["command"] = "stratified";
  report.data["comparison"] = Json{{"a", a}, {"b", b}};
  report.data["summary"] = to_json(summary);
  Table table{"", {"Stratum", "p0", "θ", "λ_SO", "λ_WR"}, {}};
  for (const auto& s : summary.per_stratum) table.rows.push_back(effect_row(s.label, s.effects));
  table.rows.push_back({std::string("Means"), std::string(""), summary.mean_theta, summary.mean_lambda_so.value,
                        summary.mean_lambda_wr.value});
  table.rows.push_back(effect_row("Pooled", summary.pooled));
  report.tables.push_back(std::move(table));
  return report;
}

inline Report binary_command(const Options& o) {
  if (o.q_a.empty() || o.q_b.empty()) fail(ErrorCode::usage, "--qa and --qb are required");
  Rational qa;
  Rational qb;
  try {
    qa = parse_rational(o.q_a);
    qb = parse_rational(o.q_b);
  } catch (const Error& e) {
    fail(ErrorCode::usage, std::string("success rate: ") + e.what());
  }
  EffectEstimates e = binary_effects(qa, qb);
  Report report;
  report.data["command"] = "binary";
  report.data["q_a"] = to_double(qa);
  report.data["q_b"] = to_double(qb);
  report.data["effects"] = to_json(e);
  report.tables.push_back({"", {"q_A", "q_B", "p0", "λ_WR = OR", "λ_SO"}, {{qa, qb, e.p_zero, e.lambda_wr, e.lambda_so}}});
  if (!o.svg.empty()) {
    write_file(o.svg, render_binary_svg(qa, qb, o.digits));
    report.data["svg"] = o.svg;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Built-in reference tables with their published values.

struct Expected {
  std::optional<builtin::Golden> p_zero;
  std::optional<builtin::Golden> theta;
  std::optional<builtin::Golden> lambda_so;
  std::optional<builtin::Golden> lambda_wr;
};

inline bool matches(const ExtendedRational& value, const builtin::Golden& g) {
  if (!g.value) return value.is_infinite();
  return value.is_finite() && std::fabs(to_double(value.value()) - *g.value) <= g.tolerance + 1e-12;
}

inline Json golden_json(const builtin::Golden& g) {
  return g.value ? Json{{"value", *g.value}, {"tolerance", g.tolerance}} : Json{{"value", "inf"}, {"tolerance", 0.0}};
}

class PaperSection {
 public:
  PaperSection(std::string name, std::string title) : name_(std::move(name)), table_{std::move(title), {}, {}} {
    table_.columns = effect_columns();
    table_.columns.push_back("check");
  }

  void add(const std::string& label, const EffectEstimates& e, const Expected& expected) {
    add_row(label, to_json(e), effect_row(label, e), ExtendedRational::finite(e.p_zero), ExtendedRational::finite(e.theta),
            e.lambda_so, e.lambda_wr, expected);
  }

  /// A row of averaged effects, which has no tie probability.
  void add_mean(const std::string& label, const StratifiedSummary& m, const Expected& expected) {
    Json values{{"theta", to_double(m.mean_theta)},
                {"lambda_so", to_json(m.mean_lambda_so.value)},
                {"lambda_wr", to_json(m.mean_lambda_wr.value)}};
    std::vector<Cell> row{label, std::string(""), m.mean_theta, m.mean_lambda_so.value, m.mean_lambda_wr.value};
    add_row(label, std::move(values), std::move(row), ExtendedRational::undefined(),
            ExtendedRational::finite(m.mean_theta), m.mean_lambda_so.value, m.mean_lambda_wr.value, expected);
  }

  void note(std::string text) { notes_.push_back(std::move(text)); }
  void extra(const std::string& key, Json value) { extra_[key] = std::move(value); }
  int mismatches() const { return mismatches_; }

  void emit(Report& report, Json& sections) {
    Json j{{"name", name_}, {"title", table_.title}, {"rows", std::move(rows_)}};
    for (auto& [k, v] : extra_.items()) j[k] = v;
    if (!notes_.empty()) j["notes"] = notes_;
    sections.push_back(std::move(j));
    report.tables.push_back(std::move(table_));
    for (auto& n : notes_) report.notes.push_back(name_ + ": " + n);
  }

 private:
  void add_row(const std::string& label, Json values, std::vector<Cell> row, const ExtendedRational& p_zero,
               const ExtendedRational& theta, const ExtendedRational& lambda_so, const ExtendedRational& lambda_wr,
               const Expected& expected) {
    Json golden = Json::object();
    bool ok = true;
    auto check = [&](const char* key, const ExtendedRational& value, const std::optional<builtin::Golden>& g) {
      if (!g) return;
      golden[key] = golden_json(*g);
      ok = ok && matches(value, *g);
    };
    check("p_zero", p_zero, expected.p_zero);
    check("theta", theta, expected.theta);
    check("lambda_so", lambda_so, expected.lambda_so);
    check("lambda_wr", lambda_wr, expected.lambda_wr);
    rows_.push_back(Json{{"label", label}, {"effects", std::move(values)}, {"golden", std::move(golden)}, {"matches", ok}});
    row.push_back(std::string(ok ? "ok" : "MISMATCH"));
    table_.rows.push_back(std::move(row));
    mismatches_ += ok ? 0 : 1;
  }

  std::string name_;
  Table table_;
  Json rows_ = Json::array();
  Json extra_ = Json::object();
  std::vector<std::string> notes_;
  int mismatches_ = 0;
};

inline builtin::Golden g(double v, double tol = 0.005) { return builtin::Golden::finite(v, tol); }
inline builtin::Golden inf() { return builtin::Golden::infinite(); }

inline PaperSection paper_table2() {
  PaperSection s("table2", "Three treatments on an ordinal scale");
  auto d = builtin::three_treatments();
  s.add("B, A", effects_from_distributions(d[1], d[0]), {std::nullopt, g(0.595), g(1.47), inf()});
  s.add("C, B", effects_from_distributions(d[2], d[1]), {std::nullopt, g(0.900), g(9.00), g(81)});
  s.add("C, A", effects_from_distributions(d[2], d[0]), {std::nullopt, g(0.955), g(21.22), inf()});
  return s;
}

inline std::string join_values(const Sample& s) {
  std::string out;
  for (const auto& v : s.values()) out += (out.empty() ? "" : " ") + s.scale().format(v);
  return out;
}

inline Report paper_table4() {
  Report r;
  Table t{"Measurements under four coarsening steps", {"Case", "A", "B"}, {}};
  Json rows = Json::array();
  for (int step = 1; step <= 4; ++step) {
    auto [a, b] = builtin::coarsened_measurements(step);
    t.rows.push_back({std::to_string(step), join_values(a), join_values(b)});
    Json va = Json::array();
    Json vb = Json::array();
    for (const auto& v : a.values()) va.push_back(a.scale().format(v));
    for (const auto& v : b.values()) vb.push_back(b.scale().format(v));
    rows.push_back(Json{{"case", step}, {"a", std::move(va)}, {"b", std::move(vb)}});
  }
  r.tables.push_back(std::move(t));
  r.data = Json{{"name", "table4"}, {"title", "Measurements under four coarsening steps"}, {"rows", std::move(rows)}};
  return r;
}

inline PaperSection paper_table5() {
  PaperSection s("table5", "Effects under coarsening");
  const double p0[] = {0.00, 0.16, 0.24, 0.64};
  const std::optional<double> wr[] = {2.125, 2.5, 2.8, std::nullopt};
  for (int step = 1; step <= 4; ++step) {
    auto [a, b] = builtin::coarsened_measurements(step);
    const auto& w = wr[step - 1];
    s.add("Case " + std::to_string(step), sample_effects(a, b),
          {g(p0[step - 1]), g(0.68), g(2.125), w ? g(*w) : inf()});
  }
  return s;
}

inline PaperSection paper_table6() {
  PaperSection s("table6", "Six ordinal scores");
  auto d = builtin::six_scores();
  s.add("A, B", effects_from_distributions(d[0], d[1]), {g(0.13), g(0.805), g(4.13), g(5.69)});
  return s;
}

inline PaperSection paper_table7() {
  PaperSection s("table7", "Scores 3, 4 and 5 merged");
  auto d = builtin::six_scores();
  auto map = builtin::merge_middle_scores();
  s.add("A, B", effects_from_distributions(merge_categories(d[0], map), merge_categories(d[1], map)),
        {g(0.31), g(0.805), g(4.13), g(16.25)});
  return s;
}

inline PaperSection paper_table8() {
  PaperSection s("table8", "Binary outcomes");
  const double p0[] = {0.5, 0.5, 0.58, 0.59, 0.66, 0.68};
  const double wr[] = {9.0, 19.0, 6.0, 12.7, 3.9, 8.1};
  const double so[] = {2.3, 2.6, 1.9, 2.1, 1.5, 1.7};
  auto grid = builtin::binary_rate_grid();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    auto e = binary_effects(parse_rational(grid[i].q_a), parse_rational(grid[i].q_b));
    s.add(std::string("q_A=") + grid[i].q_a + ", q_B=" + grid[i].q_b, e,
          {g(p0[i], 0.05), std::nullopt, g(so[i], 0.05), g(wr[i], 0.05)});
  }
  return s;
}

inline PaperSection paper_figure1() {
  PaperSection s("figure1", "Binary pairs with equal win ratio");
  auto pairs = builtin::binary_bar_pairs();
  s.add("q_A=0.821, q_B=0.6", binary_effects(parse_rational(pairs[0].q_a), parse_rational(pairs[0].q_b)),
        {std::nullopt, std::nullopt, g(1.57), g(3.06)});
  s.add("q_A=0.99, q_B=0.97", binary_effects(parse_rational(pairs[1].q_a), parse_rational(pairs[1].q_b)),
        {g(0.961), std::nullopt, g(1.04), g(3.06)});
  return s;
}

inline std::vector<PaperSection> paper_dice() {
  auto dice = builtin::tricky_dice();
  PaperSection pairs("dice", "Non-transitive dice");
  const double wr[] = {1.36, 1.33, 1.33};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& a = dice[i];
    const auto& b = dice[(i + 1) % 3];
    pairs.add(a.label() + ", " + b.label(), sample_effects(a, b), {std::nullopt, g(0.57), g(1.32), g(wr[i])});
  }
  TournamentReport t = detect_cycles(pairwise_effects(dice));
  pairs.extra("cycles", t.cycle_labels());
  for (const auto& c : t.cycle_labels()) pairs.note("dominance cycle: " + arrow_path(c));
  if (t.transitive) pairs.note("no dominance cycle");

  PaperSection mix("dice_mixture", "Each die against the mixture of all three");
  auto effects = mixture_reference_effects(dice);
  for (std::size_t i = 0; i < dice.size(); ++i) {
    mix.add(dice[i].label() + ", mixture", effects[i], {std::nullopt, g(0.5, 0.0), g(1.0, 0.0), std::nullopt});
  }
  std::vector<PaperSection> out;
  out.push_back(std::move(pairs));
  out.push_back(std::move(mix));
  return out;
}

inline PaperSection paper_stratified() {
  auto dice = builtin::tricky_dice();
  std::vector<Stratum<Sample>> strata;
  for (std::size_t i = 0; i < 3; ++i) {
    strata.push_back({"Stratum " + std::to_string(i + 1), dice[i], dice[(i + 1) % 3]});
  }
  StratifiedSummary summary = stratified_summary(strata);
  PaperSection s("stratified", "Dice as strata");
  const double wr[] = {1.36, 1.33, 1.33};
  for (std::size_t i = 0; i < 3; ++i) {
    s.add(summary.per_stratum[i].label, summary.per_stratum[i].effects,
          {std::nullopt, g(0.57), g(1.32), g(wr[i])});
  }
  s.add_mean("Means", summary, {std::nullopt, g(0.569), g(1.32), g(1.34)});
  s.add("Pooled", summary.pooled, {std::nullopt, g(0.5, 0.0), g(1.0, 0.0), g(1.0, 0.0)});
  s.extra("summary", to_json(summary));
  return s;
}

struct PaperOutcome {
  Report report;
  int mismatches = 0;
};

inline PaperOutcome paper_command(const Options& o) {
  for (int t : o.tables) {
    if (t != 2 && t != 4 && t != 5 && t != 6 && t != 7 && t != 8) {
      fail(ErrorCode::usage, "unknown table " + std::to_string(t) + " (2, 4, 5, 6, 7, 8)");
    }
  }
  for (const auto& e : o.examples) {
    if (e != "dice" && e != "stratified" && e != "figure1") {
      fail(ErrorCode::usage, "unknown example '" + e + "' (dice, stratified, figure1)");
    }
  }
  const bool all = o.tables.empty() && o.examples.empty();
  auto want_table = [&](int t) { return all || std::find(o.tables.begin(), o.tables.end(), t) != o.tables.end(); };
  auto want_example = [&](const char* e) {
    return all || std::find(o.examples.begin(), o.examples.end(), e) != o.examples.end();
  };

  PaperOutcome outcome;
  Report& report = outcome.report;
  Json sections = Json::array();
  auto emit = [&](PaperSection s) {
    outcome.mismatches += s.mismatches();
    s.emit(report, sections);
  };
  if (want_table(2)) emit(paper_table2());
  if (want_table(4)) {
    Report t4 = paper_table4();
    sections.push_back(std::move(t4.data));
    for (auto& t : t4.tables) report.tables.push_back(std::move(t));
  }
  if (want_table(5)) emit(paper_table5());
  if (want_table(6)) emit(paper_table6());
  if (want_table(7)) emit(paper_table7());
  if (want_table(8)) emit(paper_table8());
  if (want_example("figure1")) emit(paper_figure1());
  if (want_example("dice")) {
    for (auto& s : paper_dice()) emit(std::move(s));
  }
  if (want_example("stratified")) emit(paper_stratified());

  report.data["command"] = "paper";
  report.data["sections"] = std::move(sections);
  report.data["all_match"] = outcome.mismatches == 0;
  return outcome;
}

inline void add_data_options(CLI::App* sub, Options& o, bool distributions) {
  sub->add_option("--input", o.input, "CSV file with one observation per row");
  if (distributions) sub->add_option("--dist", o.dist, "JSON file of discrete distributions");
  sub->add_option("--value-col", o.value_col, "Value column name")->capture_default_str();
  sub->add_option("--group-col", o.group_col, "Group column name")->capture_default_str();
  sub->add_option("--scale", o.scale, "numeric(D) or ordinal([c1,c2,...]); inferred from the data if omitted");
  sub->add_flag("--skip-blank-rows", o.skip_blank_rows, "Ignore empty lines in the CSV");
  sub->add_option("--groups", o.groups, "Group labels to use, comma separated")->delimiter(',');
}

inline int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return 2;
    case ErrorCode::parse:
    case ErrorCode::scale: return 3;
    case ErrorCode::degenerate: return 4;
  }
  return 2;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Relative effect, success odds and win ratio for two or more samples"};
  app.name("successodds");
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "text, markdown or json")->capture_default_str();
  app.add_option("--digits", o.digits, "Decimals shown in text and markdown")->capture_default_str();
  app.add_option("--alpha", o.alpha, "1 - confidence level")->capture_default_str();
  app.add_option("--reps", o.reps, "Bootstrap replicates")->capture_default_str();
  app.add_option("--seed", o.seed, "Bootstrap seed")->capture_default_str();
  app.add_option("--threads", o.threads, "Bootstrap threads (0 = all cores)")->capture_default_str();

  auto* effects = app.add_subcommand("effects", "Effects for two groups");
  detail::add_data_options(effects, o, true);

  auto* test = app.add_subcommand("test", "Brunner-Munzel test with confidence intervals");
  detail::add_data_options(test, o, false);
  test->add_option("--alternative", o.alternative, "two_sided, greater or less")->capture_default_str();

  auto* pairwise = app.add_subcommand("pairwise", "All pairwise effects, dominance cycles and mixture reference");
  detail::add_data_options(pairwise, o, true);
  pairwise->add_option("--criterion", o.criterion, "Dominance criterion: theta or win_ratio")->capture_default_str();

  auto* stratified = app.add_subcommand("stratified", "Per-stratum, averaged and pooled effects");
  detail::add_data_options(stratified, o, false);
  stratified->add_option("--stratum-col", o.stratum_col, "Stratum column name")->capture_default_str();
  stratified->add_option("--weighting", o.weighting, "unweighted or sample_size")->capture_default_str();

  auto* binary = app.add_subcommand("binary", "Effects for two success rates");
  binary->add_option("--qa", o.q_a, "Success rate of A")->required();
  binary->add_option("--qb", o.q_b, "Success rate of B")->required();
  binary->add_option("--svg", o.svg, "Write a stacked-bar chart to this path");

  auto* paper = app.add_subcommand("paper", "Recompute the built-in reference tables and compare with published values");
  paper->add_option("--table", o.tables, "Table number: 2, 4, 5, 6, 7 or 8");
  paper->add_option("--example", o.examples, "dice, stratified or figure1");

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("successodds");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    err << code_name(ErrorCode::usage) << ": " << e.what() << '\n';
    return 2;
  }

  try {
    detail::validate(o);
    const ReportFormat format = parse_report_format(o.format);
    Report report;
    std::optional<std::string> degenerate;
    int mismatches = 0;
    if (effects->parsed()) {
      report = detail::effects_command(o);
    } else if (test->parsed()) {
      auto outcome = detail::test_command(o);
      report = std::move(outcome.report);
      degenerate = std::move(outcome.degenerate);
    } else if (pairwise->parsed()) {
      report = detail::pairwise_command(o);
    } else if (stratified->parsed()) {
      report = detail::stratified_command(o);
    } else if (binary->parsed()) {
      report = detail::binary_command(o);
    } else {
      auto outcome = detail::paper_command(o);
      report = std::move(outcome.report);
      mismatches = outcome.mismatches;
    }
    out << render_report(report, format, o.digits);
    out.flush();
    if (mismatches > 0) err << "warning: " << mismatches << " row(s) differ from the published values\n";
    if (degenerate) {
      err << code_name(ErrorCode::degenerate) << ": " << *degenerate << '\n';
      return 4;
    }
    return 0;
  } catch (const Error& e) {
    err << code_name(e.code()) << ": " << e.what() << '\n';
    return detail::exit_code(e.code());
  } catch (const std::exception& e) {
    err << code_name(ErrorCode::usage) << ": " << e.what() << '\n';
    return 2;
  }
}

}  // namespace successodds::cli
