#include "amfem/report_io.hpp"
#include "amfem/verify.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace amfem;

TEST(CheckReport, Comparisons)
{
  CheckReport r;
  EXPECT_TRUE(r.add("a", 1.0, "<=", 1.0).passed);
  EXPECT_FALSE(r.add("b", 1.0, "<", 1.0).passed);
  EXPECT_TRUE(r.add("c", 0.0, "==", 0.0).passed);
  EXPECT_FALSE(r.add("d", std::nan(""), "<=", 1.0).passed);
  EXPECT_TRUE(r.add_range("e", 0.95, 0.9, 1.1).passed);
  EXPECT_FALSE(r.add_range("f", 1.2, 0.9, 1.1).passed);
  EXPECT_FALSE(r.passed());
  EXPECT_THROW(r.add("g", 0.0, "~", 0.0), std::invalid_argument);
  const auto j = to_json(r);
  EXPECT_EQ(j["checks"].size(), 6u);
  EXPECT_TRUE(j["checks"][3]["measured"].is_null());
  EXPECT_EQ(j["checks"][4]["upper"], 1.1);
}

TEST(CheckReport, FaultNames)
{
  for (Fault f : {Fault::none, Fault::d0_sign, Fault::non_nested, Fault::marking})
    EXPECT_EQ(parse_fault(to_string(f)), f);
  EXPECT_THROW(parse_fault("gremlin"), std::invalid_argument);
}

TEST(Checks, ComplexAndItsFault)
{
  const auto cx = build_complex(refine_uniform(builtin_mesh("lshape"), 2));
  EXPECT_TRUE(check_complex(*cx, "l").passed());
  EXPECT_FALSE(check_complex(*cx, "l", true).passed());
}

TEST(Checks, OrthogonalityAndItsFault)
{
  const Mesh coarse = builtin_mesh("square");
  const Mesh fine = refine_uniform(coarse, 2);
  OrthogonalityOptions o;
  o.reference_rounds = 1;
  EXPECT_TRUE(check_orthogonality(find_problem("M1"), coarse, fine, fine.parent(), o, "p").passed());
  o.inject_non_nested = true;
  EXPECT_FALSE(check_orthogonality(find_problem("M1"), coarse, fine, fine.parent(), o, "p").passed());
}

TEST(Checks, InsufficientData)
{
  AfemConfig c;
  c.max_iterations = 2;
  const auto run = afem_run(builtin_mesh("square"), find_problem("M1"), c);
  EXPECT_THROW(check_contraction(run), InsufficientDataError);
  EXPECT_THROW(check_quasi_orthogonality(run), InsufficientDataError);
  EXPECT_THROW(convergence_table(run, "x", {}), InsufficientDataError);
}

TEST(Checks, MarkingFaultIsCaught)
{
  AfemConfig c;
  c.max_iterations = 4;
  c.reference_rounds = 0;
  const auto good = afem_run(builtin_mesh("lshape"), find_problem("S1"), c);
  EXPECT_TRUE(check_marking(good, 50).passed());
  c.inject_marking_fault = true;
  const auto bad = afem_run(builtin_mesh("lshape"), find_problem("S1"), c);
  EXPECT_FALSE(check_marking(bad, 50).passed());
}

TEST(ReportIo, ConvergenceCsvHasOneRowPerLevel)
{
  AfemConfig c;
  c.max_iterations = 3;
  c.reference_rounds = 0;
  const auto run = afem_run(builtin_mesh("square"), find_problem("M1"), c);
  std::stringstream ss;
  write_convergence_csv(ss, run);
  std::string line;
  int rows = 0;
  while (std::getline(ss, line)) ++rows;
  EXPECT_EQ(rows, 1 + static_cast<int>(run.levels.size()));
  const auto j = to_json(run);
  EXPECT_EQ(j["levels"].size(), run.levels.size());
  EXPECT_EQ(j["config"]["theta"], 0.5);
}
