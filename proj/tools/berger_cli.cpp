// Command-line front end: dims, verify, classify, table, export.
//
// Exit status: 0 all checks pass, 1 a check or computation failed, 2 usage error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"
#include "berger/berger.hpp"

namespace {

using berger::ojson;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

double parse_decimal(const std::string& s) {
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument(s);
  return v;
}

/// "-1.5", "-3/2", "2".
double parse_eps(const std::string& text) {
  double v = 0.0;
  try {
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      v = parse_decimal(text);
    } else {
      const double den = parse_decimal(text.substr(slash + 1));
      if (den == 0.0) throw UsageError("--eps: zero denominator");
      v = parse_decimal(text.substr(0, slash)) / den;
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("--eps: cannot parse '" + text + "'");
  } catch (const std::out_of_range&) {
    throw UsageError("--eps: out of range '" + text + "'");
  }
  if (!std::isfinite(v) || v == 0.0) throw UsageError("--eps must be finite and nonzero");
  return v;
}

std::string scalar_text(const ojson& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

void render_text(const ojson& j, std::ostream& os, const std::string& indent = "") {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const ojson& v = it.value();
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      os << indent << it.key() << ":\n";
      for (const auto& row : v) {
        os << indent << " ";
        for (auto c = row.begin(); c != row.end(); ++c) os << " " << c.key() << "=" << scalar_text(c.value());
        os << "\n";
      }
    } else if (v.is_object()) {
      os << indent << it.key() << ":\n";
      render_text(v, os, indent + "  ");
    } else {
      os << indent << it.key() << ": " << scalar_text(v) << "\n";
    }
  }
}

std::string csv_field(const ojson& v) {
  std::string s = scalar_text(v);
  if (s.find_first_of(",\"\n") != std::string::npos) {
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
  }
  return s;
}

void flatten(const ojson& j, const std::string& prefix, std::ostream& os) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it.value().is_object()) {
      flatten(it.value(), key, os);
    } else {
      os << csv_field(key) << "," << csv_field(it.value()) << "\n";
    }
  }
}

/// The row table of a report if it has one, otherwise key,value pairs.
void render_csv(const ojson& j, std::ostream& os) {
  for (const char* key : {"checks", "cells", "solutions", "sweep"}) {
    if (!j.contains(key) || !j[key].is_array() || j[key].empty()) continue;
    const ojson& rows = j[key];
    bool first = true;
    for (auto c = rows.front().begin(); c != rows.front().end(); ++c) {
      os << (first ? "" : ",") << csv_field(c.key());
      first = false;
    }
    os << "\n";
    for (const auto& row : rows) {
      first = true;
      for (auto c = rows.front().begin(); c != rows.front().end(); ++c) {
        os << (first ? "" : ",") << (row.contains(c.key()) ? csv_field(row[c.key()]) : "");
        first = false;
      }
      os << "\n";
    }
    return;
  }
  os << "key,value\n";
  flatten(j, "", os);
}

std::string render(const ojson& j, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    os << j.dump(2) << "\n";
  } else if (format == "csv") {
    render_csv(j, os);
  } else {
    render_text(j, os);
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invariant skew-torsion connections on Berger spheres"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<int> n;
  std::string eps_text;
  std::optional<double> tol_num, tol_sol;
  std::uint64_t seed = 0;
  std::string format = "text";
  std::string out_path;
  bool sabotage = false;
  int draws = 20;

  app.add_option("--n", n, "sphere S^{2n+1}, n >= 1");
  app.add_option("--eps", eps_text, "metric deformation, decimal or p/q");
  app.add_option("--tol-num", tol_num, "tolerance for derived identities");
  app.add_option("--tol-sol", tol_sol, "tolerance for Einstein-defect zeros");
  app.add_option("--seed", seed, "seed for random draws");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--out", out_path, "write the report to this file");

  auto* dims = app.add_subcommand("dims", "dimensions of the invariant, metric and skew-torsion spaces");
  auto* verify = app.add_subcommand("verify", "closed forms against the generic Nomizu calculus");
  verify->add_option("--draws", draws, "random parameter draws per family")->check(CLI::PositiveNumber);
  verify->add_flag("--sabotage-ricci", sabotage, "trace the wrong Ricci slot (negative control)");
  auto* classify = app.add_subcommand("classify", "variety of Einstein members for (n, eps)");
  auto* table = app.add_subcommand("table", "all 16 regime cells against the expected table");
  auto* exp = app.add_subcommand("export", "JSON summary for (n, eps)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    berger::Tolerances tol = berger::Tolerances::from_environment();
    if (tol_num) tol.num = *tol_num;
    if (tol_sol) tol.sol = *tol_sol;
    if (!(tol.num > 0.0) || !(tol.sol > 0.0)) throw UsageError("tolerances must be positive");

    auto need_n = [&] {
      if (!n) throw UsageError("--n is required");
      if (*n < 1) throw UsageError("--n must be >= 1");
      return *n;
    };
    auto need_eps = [&] {
      if (eps_text.empty()) throw UsageError("--eps is required");
      return parse_eps(eps_text);
    };

    ojson report;
    if (*dims) {
      report = berger::cmd_dims(need_n(), tol);
    } else if (*verify) {
      const int nn = need_n();
      const double e = need_eps();
      report = berger::cmd_verify(nn, e, tol, {seed, draws, sabotage});
    } else if (*classify) {
      const int nn = need_n();
      const double e = need_eps();
      report = berger::cmd_classify(nn, e, tol, seed);
    } else if (*table) {
      report = berger::cmd_table(tol, seed);
    } else if (*exp) {
      const int nn = need_n();
      const double e = need_eps();
      report = berger::cmd_export(nn, e, tol, seed);
      if (format == "text") format = "json";
    }

    const std::string text = render(report, format);
    if (out_path.empty()) {
      std::cout << text;
    } else {
      std::ofstream f(out_path, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + out_path);
      f << text;
      if (!f) throw std::runtime_error("write failed: " + out_path);
    }
    if (report.contains("pass") && !report["pass"].get<bool>()) {
      if (report.contains("first_failure") && report["first_failure"].is_string()) {
        std::cerr << "FAIL: " << report["first_failure"].get<std::string>() << "\n";
      } else {
        std::cerr << "FAIL\n";
      }
      return 1;
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
