#include <cmath>

#include "cspace/error.hpp"
#include "cspace/space.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"

using namespace cspace;
using namespace cspace::testing;

namespace {

// Straight from the definition, independent of the library's loop structure.
double reference_weighted_euclid(const Point& x, const Point& y, const std::vector<double>& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("space structure") {
  const SpacePtr sp = six_space();
  CHECK(sp->dimension_count() == 6);
  CHECK(sp->domain_count() == 3);
  CHECK(sp->domain_id("shape") == 1);
  CHECK(sp->dimension_index("sourness") == 5);
  CHECK(sp->domain_of_dimension(3) == 1);
  CHECK_THROWS_AS(sp->domain_id("smell"), LookupError);
  CHECK_THROWS_AS(sp->dimension_index("smell"), LookupError);

  CHECK_THROWS_AS(make_space({}), ValidationError);
  CHECK_THROWS_AS(make_space({{"a", {}}}), ValidationError);
  CHECK_THROWS_AS(make_space({{"a", {"x"}}, {"a", {"y"}}}), ValidationError);
  CHECK_THROWS_AS(make_space({{"a", {"x"}}, {"b", {"x"}}}), ValidationError);
}

TEST_CASE("domain set algebra") {
  const DomainSet a{0, 2};
  const DomainSet b{1, 2};
  CHECK(domain_union(a, b) == DomainSet{0, 1, 2});
  CHECK(domain_intersection(a, b) == DomainSet{2});
  CHECK(domain_difference(a, b) == DomainSet{0});
  CHECK(domain_subset(DomainSet{2}, a));
  CHECK_FALSE(domain_subset(b, a));
  CHECK(make_domain_set({2, 0, 2}) == DomainSet{0, 2});
}

TEST_CASE("weights validation") {
  const SpacePtr sp = six_space();
  const DomainSet ds{0, 1};
  std::vector<double> dw{1.5, 0.5, 0.0};
  std::vector<double> dimw{0.3, 0.7, 0.5, 0.5, 0.0, 0.0};
  CHECK_NOTHROW(Weights(sp, ds, dw, dimw));

  SUBCASE("domain weights must sum to the domain count") {
    std::vector<double> bad{1.3, 0.5, 0.0};
    CHECK_THROWS_AS(Weights(sp, ds, bad, dimw), ValidationError);
  }
  SUBCASE("dimension weights must sum to one per domain") {
    std::vector<double> bad{0.3, 0.6, 0.5, 0.5, 0.0, 0.0};
    CHECK_THROWS_AS(Weights(sp, ds, dw, bad), ValidationError);
  }
  SUBCASE("weights must be positive") {
    std::vector<double> bad{2.0, 0.0, 0.0};
    CHECK_THROWS_AS(Weights(sp, ds, bad, dimw), ValidationError);
  }
  SUBCASE("tolerance is 1e-9") {
    std::vector<double> near{1.5 + 5e-10, 0.5, 0.0};
    CHECK_NOTHROW(Weights(sp, ds, near, dimw));
    std::vector<double> off{1.5 + 5e-9, 0.5, 0.0};
    CHECK_THROWS_AS(Weights(sp, ds, off, dimw), ValidationError);
  }
  SUBCASE("normalization helper rescales") {
    const Weights w = Weights::normalized(sp, ds, {3.0, 1.0, 0.0}, {3.0, 7.0, 1.0, 1.0, 0, 0});
    CHECK(w.domain_weight(0) == doctest::Approx(1.5));
    CHECK(w.domain_weight(1) == doctest::Approx(0.5));
    CHECK(w.dimension_weight(0) == doctest::Approx(0.3));
  }
  SUBCASE("uniform") {
    const Weights w = Weights::uniform(sp, {2});
    CHECK(w.domain_weight(2) == 1.0);
    CHECK(w.dimension_weight(4) == 0.5);
    CHECK(w.domain_weight(0) == 0.0);
  }
}

TEST_CASE("domain distance") {
  const SpacePtr sp = make_space({{"d", {"d1", "d2"}}});
  const Weights w = Weights::uniform(sp, {0});
  const Point x{0.0, 0.0}, y{3.0, 4.0};
  CHECK(domain_distance(x, x, 0, w) == 0.0);
  // sqrt(0.5 * 9 + 0.5 * 16)
  CHECK(domain_distance(x, y, 0, w) == doctest::Approx(3.5355339059327378).epsilon(1e-14));
  CHECK(domain_distance(x, y, 0, w) == domain_distance(y, x, 0, w));

  const SpacePtr two = six_space();
  const Weights partial = Weights::uniform(two, {0});
  CHECK_THROWS_AS(domain_distance(Point(6, 0.0), Point(6, 1.0), 1, partial), LookupError);
  CHECK_THROWS_AS(domain_distance(Point(6, 0.0), Point(6, 1.0), 7, partial), LookupError);
}

TEST_CASE("combined distance and similarity") {
  const SpacePtr sp = plane_space();
  const Weights w = Weights::uniform(sp, {0, 1});
  const Point x{0.0, 0.0}, y{3.0, 4.0};
  CHECK(combined_distance(x, x, w) == 0.0);
  CHECK(combined_distance(x, y, w) == 7.0);

  CHECK(similarity(x, x, 1.0, w) == 1.0);
  CHECK(similarity(x, y, 1.0, w) == doctest::Approx(0.0009118819655545162).epsilon(1e-12));
  const double s1 = similarity(x, y, 0.3, w);
  CHECK(similarity(x, y, 0.6, w) == doctest::Approx(s1 * s1).epsilon(1e-12));
  CHECK_THROWS_AS(similarity(x, y, 0.0, w), ValidationError);
  CHECK_THROWS_AS(similarity(x, y, -1.0, w), ValidationError);
}

TEST_CASE("combined distance is a metric on sampled triples") {
  const SpacePtr sp = six_space();
  Random r(7);
  for (int rep = 0; rep < 20; ++rep) {
    const Weights w = r.weights(sp, sp->all_domains());
    for (int i = 0; i < 50; ++i) {
      const Point x = r.point(sp, -5, 5), y = r.point(sp, -5, 5), z = r.point(sp, -5, 5);
      CHECK(combined_distance(x, x, w) == 0.0);
      CHECK(combined_distance(x, y, w) == combined_distance(y, x, w));
      CHECK(combined_distance(x, y, w) > 0.0);
      CHECK(combined_distance(x, z, w) <=
            combined_distance(x, y, w) + combined_distance(y, z, w) + 1e-9);
    }
  }
}

TEST_CASE("reduction to weighted Euclidean and weighted Manhattan") {
  Random r(11);
  SUBCASE("one domain holding every dimension") {
    const SpacePtr sp = make_space({{"all", {"a", "b", "c", "d"}}});
    for (int i = 0; i < 200; ++i) {
      const Weights w = r.weights(sp, {0});
      const Point x = r.point(sp, -3, 3), y = r.point(sp, -3, 3);
      CHECK(combined_distance(x, y, w) ==
            doctest::Approx(reference_weighted_euclid(x, y, w.dimension_weights())).epsilon(1e-12));
    }
  }
  SUBCASE("singleton domains") {
    const SpacePtr sp = make_space({{"a", {"a"}}, {"b", {"b"}}, {"c", {"c"}}});
    for (int i = 0; i < 200; ++i) {
      const Weights w = r.weights(sp, sp->all_domains());
      const Point x = r.point(sp, -3, 3), y = r.point(sp, -3, 3);
      double manhattan = 0.0;
      for (std::size_t d = 0; d < 3; ++d) manhattan += w.domain_weight(d) * std::abs(x[d] - y[d]);
      CHECK(combined_distance(x, y, w) == doctest::Approx(manhattan).epsilon(1e-12));
    }
  }
}

TEST_CASE("betweenness") {
  const SpacePtr line = line_space();
  const Weights wl = Weights::uniform(line, {0});
  CHECK_FALSE(between(Point{0.0}, Point{5.0}, Point{1.0}, wl));
  CHECK(between(Point{0.0}, Point{0.5}, Point{1.0}, wl));

  const SpacePtr sp = six_space();
  Random r(3);
  const Weights w = r.weights(sp, sp->all_domains());
  for (int i = 0; i < 100; ++i) {
    const Point x = r.point(sp, -4, 4), z = r.point(sp, -4, 4);
    CHECK(between(x, x, z, w));
    Point mid(6);
    for (std::size_t d = 0; d < 6; ++d) mid[d] = 0.5 * (x[d] + z[d]);
    CHECK(between(x, mid, z, w));
  }
}

TEST_CASE("betweenness with singleton domains is the spanned box") {
  const SpacePtr sp = make_space({{"a", {"a"}}, {"b", {"b"}}, {"c", {"c"}}});
  Random r(5);
  const Weights w = r.weights(sp, sp->all_domains());
  int inside = 0;
  for (int i = 0; i < 2000; ++i) {
    const Point x = r.point(sp, -1, 1), z = r.point(sp, -1, 1);
    const Point y = r.point(sp, -1.5, 1.5);
    bool in_box = true;
    for (std::size_t d = 0; d < 3; ++d) {
      in_box = in_box && y[d] >= std::min(x[d], z[d]) && y[d] <= std::max(x[d], z[d]);
    }
    inside += in_box;
    CHECK(between(x, y, z, w) == in_box);
  }
  CHECK(inside > 0);
}

TEST_CASE("points must be finite and full length") {
  const SpacePtr sp = plane_space();
  CHECK_NOTHROW(check_point(*sp, Point{1.0, 2.0}));
  CHECK_THROWS_AS(check_point(*sp, Point{1.0}), ValidationError);
  CHECK_THROWS_AS(check_point(*sp, Point{1.0, NAN}), ValidationError);
}
