#include <gtest/gtest.h>

#include <sstream>

#include "gsynch/group.hpp"
#include "gsynch/group_io.hpp"

using namespace gsynch;

namespace {

int count_type(const IrrepList& list, RepType t) {
  int k = 0;
  for (const auto& r : list) k += r.type() == t;
  return k;
}

}  // namespace

TEST(FiniteGroup, RejectsNonLatinTable) {
  EXPECT_THROW(FiniteGroup::from_table(2, {0, 1, 1, 1}), Error);
}

TEST(FiniteGroup, RejectsNonAssociativeTable) {
  // Latin square with identity 0 but (1*1)*2 != 1*(1*2).
  const std::vector<int> t = {0, 1, 2, 3, 4,  //
                              1, 0, 3, 4, 2,  //
                              2, 4, 0, 1, 3,  //
                              3, 2, 4, 0, 1,  //
                              4, 3, 1, 2, 0};
  try {
    FiniteGroup::from_table(5, t);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_parameter);
  }
}

TEST(FiniteGroup, InversesAndIdentity) {
  const auto g = build_catalog("dihedral(4)").group;
  ASSERT_EQ(g.order(), 8);
  for (int a = 0; a < g.order(); ++a) {
    EXPECT_EQ(g(a, g.inverse(a)), g.identity());
    EXPECT_EQ(g(g.identity(), a), a);
  }
}

TEST(Catalog, SumOfSquaredDimensionsIsOrder) {
  for (const char* name : {"cyclic(2)", "cyclic(5)", "cyclic(8)", "dihedral(3)", "dihedral(4)", "dihedral(5)",
                           "quaternion8"}) {
    const auto g = build_catalog(name);
    int total = 0;
    for (const auto& r : g.full) total += r.complex_dim() * r.complex_dim();
    EXPECT_EQ(total, g.group.order()) << name;
  }
}

TEST(Catalog, IrrepTypes) {
  const auto d3 = build_catalog("dihedral(3)");
  EXPECT_EQ(d3.full.size(), 3u);
  EXPECT_EQ(count_type(d3.full, RepType::real), 3);

  const auto q8 = build_catalog("quaternion8");
  EXPECT_EQ(q8.full.size(), 5u);
  EXPECT_EQ(count_type(q8.full, RepType::quaternionic), 1);

  const auto c5 = build_catalog("cyclic(5)");
  EXPECT_EQ(count_type(c5.full, RepType::complex), 4);
  const auto c6 = build_catalog("cyclic(6)");
  EXPECT_EQ(count_type(c6.full, RepType::real), 2);  // trivial and sign
}

TEST(Catalog, NonredundantDropsTrivialAndConjugates) {
  EXPECT_EQ(build_catalog("cyclic(5)").nonredundant().size(), 2u);
  EXPECT_EQ(build_catalog("cyclic(6)").nonredundant().size(), 3u);
  EXPECT_EQ(build_catalog("dihedral(3)").nonredundant().size(), 2u);
  EXPECT_EQ(build_catalog("quaternion8").nonredundant().size(), 4u);
}

TEST(Catalog, UnknownNameIsInvalid) {
  EXPECT_THROW(build_catalog("icosahedral"), Error);
  EXPECT_THROW(build_catalog("cyclic(x)"), Error);
}

TEST(Irrep, PeterWeylOrthogonality) {
  for (const char* name : {"cyclic(7)", "dihedral(5)", "quaternion8"}) {
    const auto g = build_catalog(name);
    EXPECT_LT(peter_weyl_orthogonality_check(g.group, g.full), 1e-10) << name;
  }
}

TEST(Irrep, FrobeniusSchurMismatchIsRejected) {
  const auto c4 = build_catalog("cyclic(4)");
  std::vector<CMatrix> ms;
  for (int g = 0; g < 4; ++g) ms.push_back(CMatrix::Constant(1, 1, root_of_unity(4, g)));
  EXPECT_THROW(Irrep::make(c4.group, ms, RepType::real), Error);
  EXPECT_NO_THROW(Irrep::make(c4.group, ms, RepType::complex));
}

TEST(Irrep, OverlapWeights) {
  const auto q8 = build_catalog("quaternion8");
  for (const auto& r : q8.full) {
    const double expected = r.type() == RepType::quaternionic ? 1.0 : 0.5;
    EXPECT_DOUBLE_EQ(r.overlap_weight(), expected) << r.label();
  }
}

TEST(RegularRep, UnitaryBlockDiagonalises) {
  for (const char* name : {"cyclic(4)", "dihedral(3)", "quaternion8"}) {
    const auto g = build_catalog(name);
    const CMatrix u = regular_rep_unitary(g.group, g.full);
    EXPECT_LT(unitarity_defect(u), 1e-12);
    const auto dims = regular_block_dims(g.full);
    for (int h = 0; h < g.group.order(); ++h) {
      const CMatrix b = u * regular_rep(g.group, h) * u.adjoint();
      Eigen::Index start = 0;
      CMatrix mask = CMatrix::Zero(b.rows(), b.cols());
      for (std::size_t i = 0; i < dims.size(); ++i) {
        mask.block(start, start, dims[i], dims[i]).setOnes();
        start += dims[i];
      }
      const double off = (b.array() * (1.0 - mask.array())).abs().maxCoeff();
      EXPECT_LT(off, 1e-12) << name << " h=" << h;
    }
  }
}

TEST(GroupIo, JsonRoundTrip) {
  const auto g = build_catalog("dihedral(3)");
  const auto j = group_to_json(g);
  const auto back = group_from_json(j);
  EXPECT_EQ(back.group.table(), g.group.table());
  ASSERT_EQ(back.full.size(), g.full.size());
  for (std::size_t i = 0; i < g.full.size(); ++i)
    for (int h = 0; h < g.group.order(); ++h) EXPECT_LT((back.full[i](h) - g.full[i](h)).norm(), 1e-14);
}
