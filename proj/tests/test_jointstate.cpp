#include <doctest.h>

#include "marrt/errors.hpp"
#include "marrt/jointstate.hpp"
#include "properties.hpp"

using namespace marrt;

namespace {
JointPath single(std::initializer_list<Cell> cells) {
  auto it = cells.begin();
  JointPath p(JointState{*it});
  for (++it; it != cells.end(); ++it) p.push(JointState{*it}.cells());
  return p;
}
}  // namespace

TEST_CASE("collision_free examples") {
  CHECK_FALSE(collision_free(JointState{{0, 0}, {0, 1}}, JointState{{0, 1}, {0, 0}}));
  CHECK(collision_free(JointState{{0, 0}, {2, 2}}, JointState{{0, 1}, {2, 2}}));
  // follow move into a cell vacated during the same step
  CHECK(collision_free(JointState{{0, 0}, {0, 1}}, JointState{{0, 1}, {0, 2}}));
}

TEST_CASE("collision_free vertex conflicts and arity") {
  CHECK_FALSE(collision_free(JointState{{0, 0}, {2, 0}}, JointState{{1, 0}, {1, 0}}));
  CHECK_FALSE(collision_free(JointState{{0, 0}, {1, 1}, {5, 5}}, JointState{{1, 0}, {1, 2}, {1, 0}}));
  CHECK_THROWS_AS(collision_free(JointState{{0, 0}}, JointState{{0, 1}, {1, 1}}), ArityError);
}

TEST_CASE("collision_free rotation of three agents is allowed") {
  // a cycle in which nobody swaps pairwise
  const JointState from{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const JointState to{{1, 0}, {1, 1}, {0, 1}, {0, 0}};
  CHECK(collision_free(from, to));
}

TEST_CASE("collision_free symmetry and fault injection") {
  CHECK(props::collision_symmetry(5, 20000) == "");
}

TEST_CASE("path_cost examples") {
  const JointState goal{{0, 3}};
  CHECK(path_cost(single({{0, 0}, {0, 1}, {0, 2}, {0, 3}}), goal) == 3);
  CHECK(path_cost(single({{0, 2}, {0, 2}, {0, 2}, {0, 3}}), goal) == 3);
  CHECK(path_cost(single({{0, 3}}), goal) == 0);
}

TEST_CASE("path_cost counts the last arrival") {
  const JointState goal{{0, 1}};
  // arrive at t=1, wait, leave at t=3, return at t=4
  CHECK(path_cost(single({{0, 0}, {0, 1}, {0, 1}, {0, 2}, {0, 1}}), goal) == 4);
  // arrive and then wait forever: the waits are free
  CHECK(path_cost(single({{0, 0}, {0, 1}, {0, 1}, {0, 1}}), goal) == 1);
  // never reaches its goal: the whole duration
  CHECK(path_cost(single({{0, 0}, {1, 0}, {2, 0}}), goal) == 2);
}

TEST_CASE("path_cost sums agents") {
  JointPath p(JointState{{0, 0}, {4, 4}});
  p.push(JointState{{0, 1}, {4, 4}}.cells());
  p.push(JointState{{0, 2}, {4, 4}}.cells());
  CHECK(path_cost(p, JointState{{0, 2}, {4, 4}}) == 2);
  CHECK(path_cost(p, JointState{{0, 1}, {3, 4}}) == 2 + 2);
}

TEST_CASE("joint_distance examples") {
  CHECK(joint_distance(JointState{{2, 3}}, JointState{{2, 3}}) == 0.0);
  CHECK(joint_distance(JointState{{0, 0}}, JointState{{3, 4}}) == doctest::Approx(5.0));
  CHECK(joint_distance(JointState{{0, 0}, {7, 7}}, JointState{{3, 4}, {7, 7}}) == doctest::Approx(5.0));
  CHECK(joint_distance_sq(JointState{{0, 0}, {1, 1}}.cells(), JointState{{1, 0}, {0, 1}}.cells()) == 2.0);
}

TEST_CASE("joint_distance is a metric") { CHECK(props::metric_axioms(7, 20000) == ""); }

TEST_CASE("path_cost bounds on random valid paths") {
  Rng rng(31);
  const GridWorld w = generate_world(8, 0.1, 4);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 1 + rng.uniform_index(4);
    const auto start = props::random_state(w, n, rng);
    const auto goals = props::random_state(w, n, rng);
    JointPath p(start);
    const std::size_t len = rng.uniform_index(15);
    for (std::size_t k = 0; k < len; ++k) {
      std::vector<Cell> next;
      for (Cell c : p.back()) {
        const auto ch = children(w, c);
        next.push_back(ch[rng.uniform_index(ch.size())]);
      }
      const JointState cur(p.back());
      p.push(collision_free(cur, JointState(next)) ? JointState(next).cells() : cur.cells());
    }
    std::size_t away = 0;
    for (std::size_t i = 0; i < n; ++i) away += start[i] != goals[i];
    const Cost c = path_cost(p, goals);
    CHECK(c >= static_cast<Cost>(std::min(away, away * p.duration())));
    CHECK(c <= static_cast<Cost>(n * p.duration()));
  }
}

TEST_CASE("JointPath layout and append") {
  JointPath a(JointState{{0, 0}, {3, 3}});
  a.push(JointState{{0, 1}, {3, 2}}.cells());
  JointPath b(JointState{{0, 1}, {3, 2}});
  b.push(JointState{{0, 2}, {3, 1}}.cells());
  a.append(b);
  CHECK(a.steps() == 3);
  CHECK(a.duration() == 2);
  CHECK(a.agent_path(0) == std::vector<Cell>{{0, 0}, {0, 1}, {0, 2}});
  CHECK(a.agent_path(1) == std::vector<Cell>{{3, 3}, {3, 2}, {3, 1}});
  CHECK(a.state(2) == JointState{{0, 2}, {3, 1}});
  CHECK(pairwise_distinct(a.back()));
  CHECK_FALSE(pairwise_distinct(JointState{{1, 1}, {1, 1}}.cells()));
}

TEST_CASE("JointState hashing is positionwise") {
  JointStateHash h;
  CHECK(h(JointState{{1, 2}, {3, 4}}) == h(JointState{{1, 2}, {3, 4}}));
  CHECK(JointState{{1, 2}, {3, 4}} != JointState{{3, 4}, {1, 2}});
}
