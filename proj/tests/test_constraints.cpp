#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cimpute/constraints.hpp"
#include "cimpute/eval.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace cimpute;

namespace {

std::size_t count_kind(const ConstraintSet& cs, AssociationKind kind) {
  return static_cast<std::size_t>(
      std::count_if(cs.associations.begin(), cs.associations.end(), [&](const Association& a) { return a.kind == kind; }));
}

// Random raw table: categorical text, categorical ints and reals, with holes.
Table random_table(std::mt19937_64& rng) {
  const std::size_t ncols = 2 + rng() % 4;
  const std::size_t nrows = 3 + rng() % 28;
  std::vector<Column> cols;
  for (std::size_t c = 0; c < ncols; ++c) {
    Column col{"c" + std::to_string(c), {}, {}};
    const int kind = static_cast<int>(rng() % 3);
    const std::size_t distinct = 1 + rng() % 5;
    for (std::size_t r = 0; r < nrows; ++r) {
      if (rng() % 5 == 0) {
        col.cells.push_back(Cell::missing());
        continue;
      }
      const auto v = static_cast<std::int64_t>(rng() % distinct);
      if (kind == 0) col.cells.push_back(Cell::text("k" + std::to_string(v)));
      if (kind == 1) col.cells.push_back(Cell::integer(v));
      if (kind == 2) col.cells.push_back(Cell::real(static_cast<double>(rng() % 1000) / 8.0 + 0.5));
    }
    cols.push_back(std::move(col));
  }
  return Table(std::move(cols));
}

}  // namespace

TEST_CASE("column constraints") {
  const Table t = fixtures::csv("c,f,d\na,1.0,2020-01-01\na,2.0,2020-12-31\nb,3.0,2020-06-15\n");
  const ConstraintSet cs = infer_constraints(t);
  REQUIRE(cs.column_constraints.size() == 3);

  const auto& cat = std::get<CategoricalConstraint>(cs.column_constraints[0]);
  CHECK(cat.frequency == FrequencyMap{{"a", 2}, {"b", 1}});

  const auto& num = std::get<NumericConstraint>(cs.column_constraints[1]);
  CHECK(num.min == 1.0);
  CHECK(num.max == 3.0);
  CHECK(num.mean == 2.0);
  CHECK(num.dist.std == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(num.dist.std == doctest::Approx(0.8165).epsilon(1e-4));

  const auto& date = std::get<DateConstraint>(cs.column_constraints[2]);
  CHECK(date.min_date == oracle::days_since_epoch(2020, 1, 1) * 86400);
  CHECK(date.max_date == oracle::days_since_epoch(2020, 12, 31) * 86400);
  CHECK(date.median_date == oracle::days_since_epoch(2020, 6, 15) * 86400);
}

TEST_CASE("one CAT_NUM association per source value") {
  const Table t = fixtures::csv("grade,score\nA,90.5\nA,92\nA,91\nB,70\nB,72.5\nB,71\n");
  const ConstraintSet cs = infer_constraints(t);
  REQUIRE(count_kind(cs, AssociationKind::CatNum) == 2);
  const auto& a = cs.associations[0];
  CHECK(a.kind == AssociationKind::CatNum);
  CHECK(a.src_value == "A");
  CHECK(a.distribution().mean == doctest::Approx(91.1666666667));
  CHECK(a.distribution().min == 90.5);
  CHECK(a.distribution().max == 92.0);
  CHECK(a.support == 3);
  CHECK(cs.associations[1].src_value == "B");
}

TEST_CASE("constant date offset") {
  const Table t = fixtures::csv(
      "order,delivery\n2021-01-01,2021-01-04\n2021-02-10,2021-02-13\n2021-03-30,2021-04-02\n2021-12-30,2022-01-02\n");
  const ConstraintSet cs = infer_constraints(t);
  REQUIRE(count_kind(cs, AssociationKind::DateDate) == 2);
  const auto& fwd = cs.associations[0];
  CHECK(fwd.source == 0);
  CHECK(fwd.target == 1);
  CHECK(fwd.date_diff().min_diff == 259200);
  CHECK(fwd.date_diff().max_diff == 259200);
  CHECK(fwd.date_diff().mean_diff == 259200.0);
  CHECK(fwd.error == 0.0);
  CHECK(cs.associations[1].date_diff().mean_diff == -259200.0);
}

TEST_CASE("noiseless benchmark: NUM_NUM errors vanish") {
  const Table t = make_polynomial_benchmark(1000, 5, 0.0);
  CHECK(t.row_count() == 1000);
  CHECK(t.column_count() == 5);
  const ConstraintSet cs = infer_constraints(t);
  std::size_t from_base = 0;
  for (const auto& a : cs.associations) {
    if (a.kind == AssociationKind::NumNum && a.source == 0) {
      ++from_base;
      CHECK(a.error < 1e-6);
    }
  }
  CHECK(from_base == 4);
}

TEST_CASE("iris association counts") {
  const ConstraintSet cs = infer_constraints(fixtures::iris());
  CHECK(cs.column_constraints.size() == 5);
  for (std::size_t c = 0; c < 4; ++c) CHECK(std::holds_alternative<NumericConstraint>(cs.column_constraints[c]));
  CHECK(std::get<CategoricalConstraint>(cs.column_constraints[4]).frequency.size() == 3);

  CHECK(count_kind(cs, AssociationKind::CatNum) == 12);
  for (std::size_t f = 0; f < 4; ++f) {
    std::set<std::string> classes;
    for (const auto& a : cs.associations) {
      if (a.kind == AssociationKind::CatNum && a.target == f) classes.insert(*a.src_value);
    }
    CHECK(classes.size() == 3);
  }
  CHECK(count_kind(cs, AssociationKind::NumNum) == 12);
  CHECK(count_kind(cs, AssociationKind::CatNumNum) == 36);
  CHECK(count_kind(cs, AssociationKind::CatCat) == 0);
}

TEST_CASE("degenerate tables have no associations") {
  CHECK(infer_constraints(Table{}).associations.empty());
  CHECK(infer_constraints(fixtures::csv("a,b\n")).associations.empty());
  CHECK(infer_constraints(fixtures::csv("a\n1\n2\n3\n4\n")).associations.empty());
}

TEST_CASE("min_support drops thin groups") {
  const Table t = fixtures::csv("g,v\nA,1.5\nA,2.5\nA,3.5\nB,1.5\nB,2.5\n");
  const ConstraintSet cs = infer_constraints(t);
  REQUIRE(count_kind(cs, AssociationKind::CatNum) == 1);
  InferenceConfig loose;
  loose.min_support = 2;
  CHECK(count_kind(infer_constraints(t, loose), AssociationKind::CatNum) == 2);
}

TEST_CASE("properties on random tables") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 150; ++trial) {
    const Table raw = random_table(rng);
    const ConstraintSet cs = infer_constraints(raw);
    const Table t = apply_types(raw, cs.datatypes);
    const auto type = [&](std::size_t c) { return cs.datatypes.datatype(c); };

    for (const auto& a : cs.associations) {
      REQUIRE(a.source < t.column_count());
      REQUIRE(a.target < t.column_count());
      CHECK(a.source != a.target);
      CHECK(a.support >= 3);
      switch (a.kind) {
        case AssociationKind::CatCat: CHECK((is_categorical(type(a.source)) && is_categorical(type(a.target)))); break;
        case AssociationKind::CatNum: CHECK((is_categorical(type(a.source)) && is_numeric(type(a.target)))); break;
        case AssociationKind::CatText: CHECK((is_categorical(type(a.source)) && type(a.target) == DataType::Text)); break;
        case AssociationKind::NumNum: CHECK((is_numeric(type(a.source)) && is_numeric(type(a.target)))); break;
        case AssociationKind::CatNumNum:
          REQUIRE(a.catcol);
          CHECK(is_categorical(type(*a.catcol)));
          CHECK((is_numeric(type(a.source)) && is_numeric(type(a.target))));
          break;
        case AssociationKind::DateDate: CHECK((type(a.source) == DataType::Date && type(a.target) == DataType::Date)); break;
      }

      // Frequency conservation.
      if (a.kind == AssociationKind::CatCat || a.kind == AssociationKind::CatText) {
        std::size_t pairs = 0, counted = 0;
        for (std::size_t r = 0; r < t.row_count(); ++r) {
          if (t.at(r, a.source).is_present() && t.at(r, a.target).is_present() &&
              to_text(t.at(r, a.source)) == *a.src_value) {
            ++pairs;
          }
        }
        for (const auto& [_, n] : a.frequency()) counted += n;
        CHECK(counted == pairs);
        CHECK(a.support == pairs);
      }
    }

    // Structural completeness.
    const auto has = [&](AssociationKind kind, std::size_t s, std::size_t tt, const std::optional<std::string>& v) {
      return std::any_of(cs.associations.begin(), cs.associations.end(), [&](const Association& a) {
        return a.kind == kind && a.source == s && a.target == tt && (!v || a.src_value == v);
      });
    };
    for (std::size_t s = 0; s < t.column_count(); ++s) {
      for (std::size_t tt = 0; tt < t.column_count(); ++tt) {
        if (s == tt) continue;
        if (is_categorical(type(s)) && (is_categorical(type(tt)) || is_numeric(type(tt)))) {
          std::map<std::string, std::size_t> pairs;
          for (std::size_t r = 0; r < t.row_count(); ++r) {
            if (t.at(r, s).is_present() && t.at(r, tt).is_present()) ++pairs[to_text(t.at(r, s))];
          }
          const auto kind = is_categorical(type(tt)) ? AssociationKind::CatCat : AssociationKind::CatNum;
          for (const auto& [v, n] : pairs) {
            if (n >= 3) CHECK(has(kind, s, tt, v));
          }
        }
        if (is_numeric(type(s)) && is_numeric(type(tt))) {
          std::set<double> xs;
          std::size_t n = 0;
          for (std::size_t r = 0; r < t.row_count(); ++r) {
            if (t.at(r, s).is_present() && t.at(r, tt).is_present()) ++n, xs.insert(t.at(r, s).as_number());
          }
          if (n >= 3 && xs.size() >= 2) CHECK(has(AssociationKind::NumNum, s, tt, std::nullopt));
        }
      }
    }

    // Thread count never changes the result.
    InferenceConfig parallel;
    parallel.threads = 4;
    CHECK(infer_constraints(raw, parallel) == cs);
  }
}

TEST_CASE("category_cell") {
  CHECK(category_cell("7", DataType::CatNum) == Cell::integer(7));
  CHECK(category_cell("7", DataType::CatText) == Cell::text("7"));
}
