#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "support.hpp"

using namespace berger;

TEST(Num, FifteenSignificantDigits) {
  EXPECT_EQ(num(1.0 / 3.0).dump(), "0.333333333333333");
  EXPECT_EQ(num(0.1 + 0.2).dump(), "0.3");
  EXPECT_EQ(num(-0.0).dump(), "0.0");
  EXPECT_EQ(num(-1.5).dump(), "-1.5");
  EXPECT_EQ(num(std::sqrt(10.0 / 3.0)).dump(), "1.82574185835055");
  EXPECT_TRUE(num(std::numeric_limits<double>::quiet_NaN()).is_null());
  EXPECT_TRUE(num(std::numeric_limits<double>::infinity()).is_null());
}

TEST(Check, Relations) {
  EXPECT_TRUE((Check{"a", 1e-12, 1e-9, false, ""}).pass());
  EXPECT_FALSE((Check{"a", 1e-8, 1e-9, false, ""}).pass());
  EXPECT_TRUE((Check{"gap", 1e9, 1e6, true, ""}).pass());
  EXPECT_FALSE((Check{"nan", std::nan(""), 1.0, false, ""}).pass());
  EXPECT_FALSE((Check{"nan", std::nan(""), 1.0, true, ""}).pass());
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_TRUE((Check{"gap", inf, 1e6, true, ""}).pass());
  EXPECT_FALSE((Check{"r", inf, 1e-9, false, ""}).pass());
  const ojson j = to_json(Check{"x", 0.5, 1.0, true, "note"});
  EXPECT_EQ(j["relation"], ">=");
  EXPECT_EQ(j["pass"], false);
  EXPECT_EQ(j["note"], "note");
}

TEST(CmdDims, KnownCounts) {
  const ojson d3 = cmd_dims(3);
  EXPECT_EQ(d3["invariant"], 9);
  EXPECT_EQ(d3["metric"], 5);
  EXPECT_EQ(d3["skew"], 3);
  EXPECT_EQ(d3["skew_kind"], "affine");
  EXPECT_EQ(d3["sweep"].size(), 5u);
  EXPECT_TRUE(d3["eps_independent"].get<bool>());
  EXPECT_TRUE(d3["pass"].get<bool>());
  const ojson d1 = cmd_dims(1);
  EXPECT_EQ(d1["invariant"], 27);
  EXPECT_EQ(d1["metric"], 9);
  EXPECT_EQ(d1["skew"], 1);
  const ojson d6 = cmd_dims(6);
  EXPECT_EQ(d6["invariant"], 7);
  EXPECT_EQ(d6["metric"], 3);
  EXPECT_EQ(d6["skew"], 1);
}

TEST(CmdVerify, Examples) {
  for (auto [n, eps] : {std::pair{2, -1.0}, {3, 2.0}}) {
    const ojson v = cmd_verify(n, eps);
    EXPECT_TRUE(v["pass"].get<bool>()) << v.dump(2);
    EXPECT_TRUE(v["first_failure"].is_null());
  }
}

TEST(CmdVerify, EveryCellOfTheSample) {
  for (int n = 1; n <= 5; ++n)
    for (double eps : eps_sample()) {
      const ojson v = cmd_verify(n, eps);
      EXPECT_TRUE(v["pass"].get<bool>()) << "n=" << n << " eps=" << eps << " first failure " << v["first_failure"];
    }
}

TEST(CmdVerify, SabotagedRicciFails) {
  VerifyOptions opt;
  opt.sabotage_ricci = true;
  const ojson v = cmd_verify(4, -1.0, {}, opt);
  EXPECT_FALSE(v["pass"].get<bool>());
  EXPECT_EQ(v["first_failure"], "round_ricci");
  EXPECT_EQ(v["sabotage"], "ricci_convention");
}

TEST(CmdVerify, FiveSphereReportsAntisymmetricRicci) {
  const ojson v = cmd_verify(2, -1.5);
  bool seen = false;
  for (const auto& c : v["checks"])
    if (c["name"] == "ricci_antisymmetric_part") {
      seen = true;
      EXPECT_GT(c["value"].get<double>(), 1e-3);
      EXPECT_TRUE(c["pass"].get<bool>());
    }
  EXPECT_TRUE(seen);
}

TEST(CmdClassify, Examples) {
  const ojson c = cmd_classify(3, -1.0);
  EXPECT_EQ(c["kind"], "cone");
  EXPECT_TRUE(c["pass"].get<bool>());
  EXPECT_FALSE(c["solutions"].empty());
  const ojson d = cmd_classify(5, 0.7);
  EXPECT_EQ(d["kind"], "two_points");
  EXPECT_EQ(d["solutions"].size(), 2u);
  for (const auto& s : d["solutions"]) {
    EXPECT_NEAR(s["scalar"].get<double>(), s["scalar_formula"].get<double>(), 1e-8);
    EXPECT_LE(s["defect"].get<double>(), 1e-8);
  }
  EXPECT_EQ(cmd_classify(2, -0.5)["solutions"].size(), 0u);
}

TEST(CmdTable, AllCellsMatch) {
  const ojson t = cmd_table();
  EXPECT_EQ(t["matched"], 16);
  EXPECT_EQ(t["total"], 16);
  EXPECT_EQ(t["numeric_consistent"], 16);
  EXPECT_TRUE(t["pass"].get<bool>());
}

TEST(CmdExport, Contents) {
  const ojson e = cmd_export(1, -1.0);
  EXPECT_EQ(e["kind"], "line");
  EXPECT_EQ(e["tool"], kToolName);
  EXPECT_TRUE(e["flat"].is_null());
  std::vector<std::string> keys;
  for (auto it = e.begin(); it != e.end(); ++it) keys.push_back(it.key());
  const std::vector<std::string> want{"tool",     "version",  "seed",     "n",         "eps",
                                      "dims",     "kind",     "equation", "solutions", "scalar_curvatures",
                                      "ricci_flat", "flat",   "residuals"};
  EXPECT_EQ(keys, want);
  const ojson r = cmd_export(2, -1.5);
  EXPECT_TRUE(r["ricci_flat"]["ricci_flat"].get<bool>());
  EXPECT_LE(r["ricci_flat"]["max_sym_ricci_norm"].get<double>(), 1e-8);
  const ojson f = cmd_export(3, -1.0);
  EXPECT_TRUE(f["flat"]["flat_exists"].get<bool>());
  EXPECT_TRUE(f["ricci_flat"]["ricci_flat"].get<bool>());
}

TEST(CmdExport, Deterministic) {
  EXPECT_EQ(cmd_export(3, 1.0, {}, 7).dump(2), cmd_export(3, 1.0, {}, 7).dump(2));
  EXPECT_EQ(cmd_export(2, -1.5).dump(2), cmd_export(2, -1.5).dump(2));
}
