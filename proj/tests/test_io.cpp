#include <gtest/gtest.h>

#include <sstream>

#include "catent/io.hpp"

using namespace catent;
using catent::io::json;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

}  // namespace

TEST(Io, MatrixFromJson) {
  auto m = io::matrix_from_json(json::parse(R"([[1, "1/2"], ["-3", "0.25"]])"));
  EXPECT_EQ(m, (ExactMatrix{{1, Rational(1, 2)}, {-3, Rational(1, 4)}}));
  EXPECT_EQ(io::matrix_from_json(json::parse(R"({"rows": [[7]]})")), ExactMatrix{{7}});
  EXPECT_EQ(kind_of([] { io::matrix_from_json(json::parse("[[1, 0.5], [0, 1]]")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(json::parse("[[1, 2], [3]]")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(json::parse("[]")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::matrix_from_json(json::parse(R"([["x"]])")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::parse_json("{", "input"); }), ErrorKind::Parse);
}

TEST(Io, SequenceInputs) {
  auto a = io::sequence_from_text("1\n2\n\n3.5\n4\n5\n6\n7\n8\n");
  EXPECT_EQ(a.values.size(), 8u);
  EXPECT_EQ(a.at(3), 3.5L);
  auto b = io::sequence_from_text(R"({"n_start": 5, "values": [1, 2, 3, 4, 5, 6, 7, 8]})");
  EXPECT_EQ(b.n_start, 5);
  EXPECT_EQ(b.n_end(), 12);
  EXPECT_EQ(kind_of([] { io::sequence_from_text("1\nabc\n"); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::sequence_from_text("1\n0\n3\n4\n5\n6\n7\n8\n"); }), ErrorKind::Domain);
}

TEST(Io, EndoAndLineBundleAndQuiver) {
  auto e = io::endo_from_json(
      json::parse(R"({"dim": 1, "actions": {"0": [[1]], "1": [[3]]}, "labels": {"0": ["1"], "1": ["pt"]}})"));
  EXPECT_EQ(e.dim, 1u);
  EXPECT_EQ(e.actions[1], ExactMatrix{{3}});
  EXPECT_EQ(e.labels[1].front(), "pt");
  EXPECT_EQ(kind_of([] { io::endo_from_json(json::parse(R"({"dim": 1, "actions": {"0": [[1]]}})")); }),
            ErrorKind::Parse);

  auto lb = io::line_bundle_from_json(
      json::parse(R"({"dim": 1, "c1_action": [[0, 0], [1, 0]], "nef": "antinef", "cohomology": {"0": [2, 3, 4, 5, 6, 7, 8, 9]}})"));
  EXPECT_EQ(lb.nef, NefFlag::AntiNef);
  EXPECT_EQ(lb.cohomology.at(0).values.size(), 8u);
  EXPECT_EQ(kind_of([] { io::nef_from_string("ample"); }), ErrorKind::Parse);

  auto q = io::quiver_from_json(json::parse(R"({"vertices": 3, "arrows": [[1, 2], [2, 3]]})"));
  EXPECT_EQ(q.vertex_count(), 3u);
  EXPECT_EQ(q.arrows().back(), (std::pair<unsigned, unsigned>{1, 2}));
  EXPECT_EQ(kind_of([] { io::quiver_from_json(json::parse(R"({"vertices": 2, "arrows": [[1, 2], [2, 1]]})")); }),
            ErrorKind::Domain);
}

TEST(Io, ExtTables) {
  auto t = io::ext_tables_from_json(json::parse(R"([{"0": 2, "-1": 3}, {}])"));
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].dims.at(-1), 3u);
  EXPECT_EQ(kind_of([] { io::ext_tables_from_json(json::parse(R"([{"a": 1}])")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([] { io::ext_tables_from_json(json::parse(R"([{"1": -1}])")); }), ErrorKind::Parse);
}

TEST(Io, NumberFormatting) {
  EXPECT_EQ(io::number(2.618033988749895).dump(), "2.61803398875");
  EXPECT_EQ(io::number(3.0).dump(), "3");
  EXPECT_EQ(io::number(-0.0).dump(), "0");
  EXPECT_EQ(io::number(0.9624236501192069).dump(), "0.962423650119");
  EXPECT_TRUE(io::number(std::nan("")).is_null());
  EXPECT_EQ(io::exact(Rational(3, 4)).dump(), "\"3/4\"");
  EXPECT_EQ(io::exact(Rational(-5)).dump(), "-5");
}

TEST(Io, GrowthSignatureJson) {
  auto j = io::to_json(growth_signature(ExactMatrix{{1, 1}, {0, 1}}));
  EXPECT_EQ(j["rho"], 1);
  EXPECT_EQ(j["rho_exact"], 1);
  EXPECT_EQ(j["s"], 1);
  EXPECT_EQ(j["log_rho"], 0);
  EXPECT_EQ(j["quasi_unipotent_order"], 1);

  auto h = io::to_json(growth_signature(ExactMatrix{{2, 1}, {1, 1}}));
  EXPECT_EQ(h["rho"].dump(), "2.61803398875");
  EXPECT_EQ(h["log_rho"].dump(), "0.962423650119");
  EXPECT_EQ(h["rho_exact"]["largest_root_modulus_of"], "x^2 - 3*x + 1");
  EXPECT_FALSE(h.contains("quasi_unipotent_order"));
}

TEST(Io, CanonicalFormIsKeyOrderIndependent) {
  auto a = json::parse(R"({"b": 1, "a": {"y": [1, 2], "x": "s"}})");
  auto b = json::parse(R"({"a": {"x": "s", "y": [1, 2]}, "b": 1})");
  EXPECT_EQ(io::canonical(a), io::canonical(b));
  EXPECT_EQ(io::canonical(a), R"({"a":{"x":"s","y":[1,2]},"b":1})");
}

TEST(Io, RenderText) {
  std::ostringstream os;
  io::render_text(os, json::parse(R"({"a": 1, "b": {"c": [1, 2]}, "d": [{"e": "x"}]})"));
  EXPECT_EQ(os.str(), "a: 1\nb:\n  c: [1,2]\nd:\n  -\n    e: x\n");
}
