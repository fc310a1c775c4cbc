#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "opclass/generators.hpp"
#include "opclass/membership.hpp"
#include "support.hpp"

using namespace opclass;
using namespace testing_support;

namespace {

const Complex I{0, 1};
constexpr double kTolDecision = 1e-8;

bool is(const MembershipVerdict& v, Status s) { return v.status == s; }

// ||T^n|| vs ||T||^n for n = 2..6, computed directly
bool power_norms_match(const Matrix& t) {
  const double norm = operator_norm(t);
  Matrix p = t;
  for (int n = 2; n <= 6; ++n) {
    p = p * t;
    if (std::abs(operator_norm(p) - std::pow(norm, n)) > kTolDecision * std::max(1.0, std::pow(norm, n))) return false;
  }
  return true;
}

Matrix jordan(int n) { return jordan_block(n); }

}  // namespace

TEST_CASE("is_normal") {
  CHECK(is(is_normal(diag({1, I})), Status::Member));
  const auto v = is_normal(j2());
  CHECK(is(v, Status::NonMember));
  // self-commutator diag(-1, 1)
  CHECK(v.defect == doctest::Approx(-std::sqrt(2.0)));
  const Matrix u = random_unitary(4, 3);
  CHECK(is(is_normal(Matrix(u * diag({1, I, -2.0, 0.5 + I}) * u.adjoint())), Status::Member));
}

TEST_CASE("is_quasinormal and Embry") {
  CHECK(is(is_quasinormal(random_normal(4, 1)), Status::Member));
  const Matrix t = j2();
  CHECK(dist(t * t.adjoint() * t, t) == 0);
  CHECK((t.adjoint() * t * t).norm() == 0);
  CHECK(is(is_quasinormal(t), Status::NonMember));
  CHECK(is(is_quasinormal(Matrix::Zero(3, 3)), Status::Member));

  for (int kmax : {2, 3, 5}) CHECK(is(quasinormal_embry(random_normal(4, 2), kmax), Status::Member));
  CHECK(is(quasinormal_embry(t, 2), Status::NonMember));
  CHECK_THROWS_AS(quasinormal_embry(t, 1), Error);

  int disagreements = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Matrix g = random_ginibre(5, s);
    disagreements += quasinormal_embry(g, 3).status != is_quasinormal(g).status;
    const Matrix n = random_normal(5, 1000 + s);
    disagreements += quasinormal_embry(n, 3).status != is_quasinormal(n).status;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("hyponormal family") {
  CHECK(is(is_hyponormal(random_normal(4, 3)), Status::Member));
  auto v = is_hyponormal(j2());
  CHECK(is(v, Status::NonMember));
  CHECK(v.defect == doctest::Approx(-1));

  for (std::uint64_t s = 0; s < 30; ++s) {
    const Matrix g = random_ginibre(4, s);
    CHECK(is_p_hyponormal(g, 1.0).status == is_hyponormal(g).status);
    const Matrix n = random_normal(4, s);
    const auto h = is_hyponormal(n);
    if (is(h, Status::Member)) CHECK(is(is_normal(n), Status::Member));
    CHECK(is(is_p_hyponormal(n, 0.3), Status::Member));
  }
  CHECK(is(is_p_hyponormal(j2(), 0.5), Status::NonMember));
  CHECK_THROWS_AS(is_p_hyponormal(j2(), 0.0), Error);
  CHECK_THROWS_AS(is_p_hyponormal(j2(), 1.5), Error);
}

TEST_CASE("class A") {
  CHECK(is(is_class_a(random_normal(4, 5)), Status::Member));
  CHECK(is(is_class_a(j2()), Status::NonMember));
  CHECK(is(is_class_a(diag({2.0 + I, -0.5})), Status::Member));
  CHECK(is(is_class_a(diag({0, 3.0 * I})), Status::Member));
}

TEST_CASE("k-quasi-paranormal") {
  for (int k = 1; k <= 3; ++k) CHECK(is(is_k_quasi_paranormal(jordan(k + 1), k), Status::Member));
  const auto v = is_k_quasi_paranormal(j2(), 0);
  CHECK(is(v, Status::NonMember));
  // a NonMember witness recomputes below -tol_decision through the exact inequality
  REQUIRE(v.witness.vector.has_value());
  CHECK(k_quasi_paranormal_defect(j2(), 0, *v.witness.vector) <= -kTolDecision);
  CHECK(is(is_paranormal(j2()), Status::NonMember));

  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix t = k_quasi_member(2, 3, 1, s);
    CHECK(is(is_k_quasi_paranormal(t, 1, {.seed = s}), Status::Member));
    CHECK(is(is_k_quasi_paranormal(t, 2, {.seed = s}), Status::Member));
  }
}

TEST_CASE("k-paranormal and absolute-k-paranormal") {
  int disagree_k = 0, disagree_abs = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const Matrix g = random_ginibre(4, 500 + s);
    const MembershipOptions opts{.seed = s};
    const auto para = is_paranormal(g, opts).status;
    disagree_k += is_k_paranormal(g, 1, opts).status != para;
    disagree_abs += is_absolute_k_paranormal(g, 1, opts).status != para;
  }
  CHECK(disagree_k == 0);
  CHECK(disagree_abs == 0);

  for (int k : {1, 2, 3}) {
    CHECK(is(is_k_paranormal(random_normal(4, 7), k), Status::Member));
    CHECK(is(is_absolute_k_paranormal(random_normal(4, 8), k), Status::Member));
  }
  CHECK(is(is_k_paranormal(j2(), 2), Status::NonMember));
  CHECK(k_paranormal_defect(j2(), 2, basis_vector(2, 1)) == doctest::Approx(-1));
  CHECK(is(is_absolute_k_paranormal(j2(), 2), Status::NonMember));
  CHECK(absolute_k_paranormal_defect(j2(), 2, basis_vector(2, 1)) == doctest::Approx(-1));
}

TEST_CASE("normaloid") {
  CHECK(is(is_normaloid(j2()), Status::NonMember));
  CHECK(is(is_normaloid(random_unitary(5, 1)), Status::Member));
  CHECK(is(is_normaloid(random_normal(5, 2)), Status::Member));
  CHECK(is(is_normaloid(normaloid_counterexample(2, 2, 3)), Status::Member));
  for (std::uint64_t s = 0; s < 30; ++s) {
    const Matrix g = random_ginibre(4, s);
    const auto v = is_normaloid(g);
    if (v.status != Status::Inconclusive) CHECK(is(v, Status::Member) == power_norms_match(g));
  }
}

TEST_CASE("pencil_check") {
  PencilSpec p;
  p.terms = {{Matrix::Identity(2, 2), 1.0, 2.0}};
  CHECK(is(pencil_check(p), Status::Member));

  const auto v = pencil_check(k_quasi_paranormal_pencil(j2(), 0));
  CHECK(is(v, Status::NonMember));
  // min over lambda of lambda^2 - 2 lambda is -1 at lambda = 1
  CHECK(v.defect == doctest::Approx(-1).epsilon(1e-6));
  REQUIRE(v.witness.lambda.has_value());
  CHECK(*v.witness.lambda == doctest::Approx(1).epsilon(1e-3));

  for (int k : {0, 1, 2}) CHECK(is(pencil_check(k_quasi_paranormal_pencil(random_normal(4, k), k)), Status::Member));

  PencilSpec bad;
  bad.terms = {{j2(), 1.0, 0.0}};
  CHECK_THROWS_AS(pencil_check(bad), Error);
  PencilSpec empty_window;
  empty_window.terms = {{Matrix::Identity(2, 2), 1.0, 0.0}};
  empty_window.lambda_max = -1;
  CHECK_THROWS_AS(pencil_check(empty_window), Error);
}

TEST_CASE("pencil inconclusive band") {
  PencilSpec p;
  p.terms = {{Matrix::Identity(2, 2), -5e-10, 0.0}};
  CHECK(is(pencil_check(p), Status::Inconclusive));
  p.terms = {{Matrix::Identity(2, 2), -5e-8, 0.0}};
  CHECK(is(pencil_check(p), Status::NonMember));
  p.terms = {{Matrix::Identity(2, 2), -5e-11, 0.0}};
  CHECK(is(pencil_check(p), Status::Member));
}

TEST_CASE("sphere_check") {
  const auto zero = [](const Vector&) { return 0.0; };
  auto v = sphere_check(zero, 3, {});
  CHECK(is(v, Status::Member));
  CHECK(v.defect == doctest::Approx(0));

  const Matrix t = j2();
  const auto paranormal = [&](const Vector& x) { return (t * t * x).norm() - (t * x).squaredNorm(); };
  v = sphere_check(paranormal, 2, {});
  CHECK(is(v, Status::NonMember));
  CHECK(v.defect == doctest::Approx(-1).epsilon(1e-6));
  REQUIRE(v.witness.vector.has_value());
  CHECK(std::abs((*v.witness.vector)(1)) == doctest::Approx(1).epsilon(1e-4));

  // inconclusive band (-tol_decision, -tol_decision / 10)
  CHECK(is(sphere_check([](const Vector&) { return -3e-9; }, 2, {}), Status::Inconclusive));
  CHECK(is(sphere_check([](const Vector&) { return -1e-7; }, 2, {}), Status::NonMember));
  CHECK(is(sphere_check([](const Vector&) { return -1e-10; }, 2, {}), Status::Member));
}

TEST_CASE("oracle agreement on random matrices") {
  int disagreements = 0, inconclusive = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Matrix g = random_ginibre(5, 9000 + s);
    for (auto family : {PencilFamily::KQuasiParanormal, PencilFamily::KParanormal, PencilFamily::AbsoluteKParanormal})
      for (int k : {0, 1, 2}) {
        if (k == 0 && family != PencilFamily::KQuasiParanormal) continue;
        const auto pair = run_oracles(g, family, k, {.seed = s});
        if (pair.pencil.status == Status::Inconclusive || pair.sphere.status == Status::Inconclusive)
          ++inconclusive;
        else
          disagreements += pair.pencil.status != pair.sphere.status;
      }
  }
  CHECK(disagreements == 0);
  CHECK(inconclusive <= 10);
}

TEST_CASE("classify_all") {
  auto c = classify_all(Matrix::Identity(3, 3));
  for (const auto& [cls, v] : c.verdicts) CHECK_MESSAGE(is(v, Status::Member), cls.name());

  c = classify_all(j2());
  for (const auto& [cls, v] : c.verdicts) {
    const bool kq = cls.label == ClassLabel::KQuasiParanormal && cls.k >= 1;
    CHECK_MESSAGE(is(v, kq ? Status::Member : Status::NonMember), cls.name());
  }
  CHECK(c.chain_violations.empty());

  c = classify_all(random_normal(4, 11));
  for (const auto& [cls, v] : c.verdicts) CHECK_MESSAGE(is(v, Status::Member), cls.name());

  c = classify_all(Matrix::Zero(3, 3));
  for (const auto& [cls, v] : c.verdicts) CHECK_MESSAGE(is(v, Status::Member), cls.name());
}

TEST_CASE("class names and identification") {
  CHECK(OperatorClass::k_quasi_paranormal(0) == OperatorClass::paranormal());
  CHECK(OperatorClass::k_quasi_paranormal(2).name() == "KQuasiParanormal(2)");
  CHECK(OperatorClass::p_hyponormal(0.5).name() == "PHyponormal(0.5)");
  CHECK_THROWS_AS(OperatorClass::k_paranormal(0), Error);
}

TEST_CASE("chain_violations flags broken implications") {
  std::map<OperatorClass, MembershipVerdict> verdicts;
  verdicts[OperatorClass::normal()].status = Status::Member;
  verdicts[OperatorClass::normaloid()].status = Status::NonMember;
  CHECK_FALSE(chain_violations(verdicts).empty());
}

TEST_CASE("unitary invariance and scaling") {
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Matrix t = s % 2 ? random_ginibre(4, s) : k_quasi_member(2, 2, 1, s);
    const Matrix u = random_unitary(4, 100 + s);
    const Matrix conj = u * t * u.adjoint();
    const auto a = classify_all(t, {1, 2}, {0.5}, {.seed = s});
    const auto b = classify_all(conj, {1, 2}, {0.5}, {.seed = s});
    const auto c = classify_all(Matrix(2.5 * t), {1, 2}, {0.5}, {.seed = s});
    for (const auto& [cls, v] : a.verdicts) {
      CHECK_MESSAGE(v.status == b.verdicts.at(cls).status, cls.name());
      CHECK_MESSAGE(v.status == c.verdicts.at(cls).status, cls.name());
    }
  }
}
