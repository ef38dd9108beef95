#pragma once

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "successodds/bootstrap.hpp"
#include "successodds/brunner_munzel.hpp"
#include "successodds/effects.hpp"
#include "successodds/error.hpp"
#include "successodds/extended.hpp"
#include "successodds/multigroup.hpp"
#include "successodds/rational.hpp"
#include "successodds/stratified.hpp"

namespace successodds {

using Json = nlohmann::ordered_json;

enum class ReportFormat { text, markdown, json };

inline ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::text;
  if (s == "markdown") return ReportFormat::markdown;
  if (s == "json") return ReportFormat::json;
  fail(ErrorCode::usage, "unknown format '" + std::string(s) + "' (text, markdown, json)");
}

// ---------------------------------------------------------------------------
// JSON encoding. Numbers carry full double precision; +inf and 0/0 are the
// strings "inf" and "undef"; exact rationals are kept as "p/q" strings.

inline Json to_json(const ExtendedRational& x) {
  switch (x.state()) {
    case ExtendedState::finite: return to_double(x.value());
    case ExtendedState::plus_infinity: return "inf";
    case ExtendedState::undefined: break;
  }
  return "undef";
}

inline Json to_json(const ExtendedReal& x) {
  switch (x.state()) {
    case ExtendedState::finite: return x.value();
    case ExtendedState::plus_infinity: return "inf";
    case ExtendedState::undefined: break;
  }
  return "undef";
}

inline std::string exact_text(const Rational& r) { return r.str(); }

inline Json exact_text(const ExtendedRational& x) {
  return x.is_finite() ? Json(x.value().str()) : Json(state_token(x.state()));
}

inline Json to_json(const EffectEstimates& e) {
  Json j;
  j["p_plus"] = to_double(e.p_plus);
  j["p_zero"] = to_double(e.p_zero);
  j["p_minus"] = to_double(e.p_minus);
  j["theta"] = to_double(e.theta);
  j["lambda_so"] = to_json(e.lambda_so);
  j["lambda_wr"] = to_json(e.lambda_wr);
  if (e.odds_ratio) j["odds_ratio"] = to_json(*e.odds_ratio);
  Json exact;
  exact["p_plus"] = exact_text(e.p_plus);
  exact["p_zero"] = exact_text(e.p_zero);
  exact["p_minus"] = exact_text(e.p_minus);
  exact["theta"] = exact_text(e.theta);
  exact["lambda_so"] = exact_text(e.lambda_so);
  exact["lambda_wr"] = exact_text(e.lambda_wr);
  j["exact"] = std::move(exact);
  return j;
}

inline Json to_json(const PairCounts& c) {
  return Json{{"wins", c.wins}, {"ties", c.ties}, {"losses", c.losses}, {"n_pairs", c.n_pairs}};
}

inline Json to_json(const TestResult& r) {
  Json j;
  j["n1"] = r.n1;
  j["n2"] = r.n2;
  j["theta_hat"] = r.theta_hat;
  j["variance_hat"] = r.variance_hat;
  j["alternative"] = alternative_name(r.alternative);
  j["degenerate"] = r.degenerate;
  if (r.degenerate) {
    j["degenerate_reason"] = r.degenerate_reason;
    j["df"] = nullptr;
    j["statistic"] = nullptr;
    j["p_value"] = nullptr;
  } else {
    j["df"] = r.df;
    j["statistic"] = *r.statistic;
    j["p_value"] = *r.p_value;
  }
  return j;
}

inline Json to_json(const ConfidenceInterval& ci) {
  return Json{{"parameter", interval_scale_name(ci.scale)}, {"method", interval_method_name(ci.method)},
              {"level", ci.level},                          {"estimate", to_json(ci.estimate)},
              {"lower", to_json(ci.lower)},                 {"upper", to_json(ci.upper)}};
}

inline Json to_json(const BootstrapInterval& b, std::uint64_t seed) {
  Json j = to_json(b.interval);
  j["reps"] = b.reps;
  j["seed"] = seed;
  j["infinite_replicates"] = b.infinite_replicates;
  j["undefined_replicates"] = b.undefined_replicates;
  return j;
}

inline Json to_json(const PairwiseMatrix& m) {
  Json cells = Json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      cells.push_back(Json{{"row", m.labels()[i]}, {"column", m.labels()[j]}, {"effects", to_json(m.cell(i, j))}});
    }
  }
  return Json{{"labels", m.labels()}, {"cells", std::move(cells)}};
}

inline Json to_json(const TournamentReport& t) {
  Json edges = Json::array();
  for (auto [i, j] : t.edges) edges.push_back(Json{{"from", t.labels[i]}, {"to", t.labels[j]}});
  return Json{{"edges", std::move(edges)}, {"cycles", t.cycle_labels()}, {"transitive", t.transitive}};
}

inline Json to_json(const ExtendedMean& m) {
  return Json{{"value", to_json(m.value)}, {"poisoned", m.poisoned}};
}

inline Json to_json(const StratifiedSummary& s) {
  Json strata = Json::array();
  for (const auto& st : s.per_stratum) {
    strata.push_back(Json{{"stratum", st.label}, {"weight", to_double(st.weight)}, {"effects", to_json(st.effects)}});
  }
  return Json{{"weighting", s.weighting == StratumWeighting::unweighted ? "unweighted" : "sample_size"},
              {"per_stratum", std::move(strata)},
              {"mean_theta", to_double(s.mean_theta)},
              {"mean_lambda_so", to_json(s.mean_lambda_so)},
              {"mean_lambda_wr", to_json(s.mean_lambda_wr)},
              {"pooled", to_json(s.pooled)}};
}

// ---------------------------------------------------------------------------
// Tables for text and markdown output. Cells keep full values; rounding
// happens only when rendering.

using Cell = std::variant<std::string, Rational, ExtendedRational, double, ExtendedReal>;

struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Report {
  Json data;
  std::vector<Table> tables;
  std::vector<std::string> notes;
};

namespace detail {

inline std::string render_extended_state(ExtendedState s) {
  return s == ExtendedState::plus_infinity ? "∞" : "–";
}

inline std::string render_cell(const Cell& cell, int digits) {
  struct Visitor {
    int digits;
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const Rational& r) const { return format_fixed(r, digits); }
    std::string operator()(const ExtendedRational& x) const {
      return x.is_finite() ? format_fixed(x.value(), digits) : render_extended_state(x.state());
    }
    std::string operator()(double x) const {
      if (std::isnan(x)) return render_extended_state(ExtendedState::undefined);
      if (std::isinf(x)) return x > 0 ? render_extended_state(ExtendedState::plus_infinity) : "-∞";
      return format_fixed(x, digits);
    }
    std::string operator()(const ExtendedReal& x) const {
      return x.is_finite() ? (*this)(x.value()) : render_extended_state(x.state());
    }
  };
  return std::visit(Visitor{digits}, cell);
}

// Display width in code points (the infinity sign and en dash are one column).
inline std::size_t display_width(std::string_view s) {
  std::size_t w = 0;
  for (unsigned char c : s) {
    if ((c & 0xC0) != 0x80) ++w;
  }
  return w;
}

inline std::string pad(const std::string& s, std::size_t width, bool right) {
  std::size_t w = display_width(s);
  if (w >= width) return s;
  std::string fill(width - w, ' ');
  return right ? fill + s : s + fill;
}

}  // namespace detail

/// Renders a report. JSON output is the data tree with 2-space indentation;
/// text and markdown render the tables with `digits` decimals, rounded half
/// away from zero.
inline std::string render_report(const Report& report, ReportFormat format, int digits = 3) {
  if (digits < 0 || digits > 9) fail(ErrorCode::usage, "digits must lie in 0..9");
  if (format == ReportFormat::json) return report.data.dump(2) + "\n";

  std::ostringstream out;
  bool first = true;
  for (const auto& table : report.tables) {
    if (!first) out << '\n';
    first = false;
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : table.rows) {
      std::vector<std::string> r;
      for (const auto& c : row) r.push_back(detail::render_cell(c, digits));
      cells.push_back(std::move(r));
    }
    if (format == ReportFormat::markdown) {
      if (!table.title.empty()) out << "### " << table.title << "\n\n";
      out << '|';
      for (const auto& c : table.columns) out << ' ' << c << " |";
      out << "\n|";
      for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i == 0 ? "---|" : "---:|");
      out << '\n';
      for (const auto& row : cells) {
        out << '|';
        for (const auto& c : row) out << ' ' << c << " |";
        out << '\n';
      }
      continue;
    }
    std::vector<std::size_t> width(table.columns.size(), 0);
    for (std::size_t i = 0; i < table.columns.size(); ++i) width[i] = detail::display_width(table.columns[i]);
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
        width[i] = std::max(width[i], detail::display_width(row[i]));
      }
    }
    if (!table.title.empty()) out << table.title << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
      out << (i ? "  " : "") << detail::pad(table.columns[i], width[i], i > 0);
    }
    out << '\n';
    for (const auto& row : cells) {
      for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) {
        out << (i ? "  " : "") << detail::pad(row[i], width[i], i > 0);
      }
      out << '\n';
    }
  }
  if (!report.notes.empty()) {
    out << '\n';
    for (const auto& n : report.notes) out << (format == ReportFormat::markdown ? "- " : "") << n << '\n';
  }
  return out.str();
}

/// Two stacked bars (success q at the bottom, failure 1 - q on top) for
/// treatments A and B, SVG 1.1 without scripting.
inline std::string render_binary_svg(const Rational& q_a, const Rational& q_b, int digits = 3) {
  constexpr double height = 300.0;
  constexpr double top = 40.0;
  constexpr double bar_width = 80.0;
  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"320\" height=\"400\" "
         "viewBox=\"0 0 320 400\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"320\" height=\"400\" fill=\"white\"/>\n";
  auto bar = [&](const char* name, const Rational& q, double x) {
    const double success = to_double(q) * height;
    const double failure = height - success;
    const std::string q_text = format_fixed(q, digits);
    const std::string rest_text = format_fixed(Rational(1 - q), digits);
    svg << "  <g id=\"bar-" << name << "\">\n"
        << "    <rect x=\"" << x << "\" y=\"" << top << "\" width=\"" << bar_width << "\" height=\"" << failure
        << "\" fill=\"#d9d9d9\" stroke=\"black\"/>\n"
        << "    <rect x=\"" << x << "\" y=\"" << top + failure << "\" width=\"" << bar_width << "\" height=\""
        << success << "\" fill=\"#4a7ab5\" stroke=\"black\"/>\n"
        << "    <text x=\"" << x + bar_width / 2 << "\" y=\"" << top + failure + success / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"white\">" << q_text
        << "</text>\n"
        << "    <text x=\"" << x + bar_width / 2 << "\" y=\"" << top - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << rest_text << "</text>\n"
        << "    <text x=\"" << x + bar_width / 2 << "\" y=\"" << top + height + 24
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" << name << "</text>\n"
        << "  </g>\n";
  };
  bar("A", q_a, 60.0);
  bar("B", q_b, 180.0);
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace successodds
