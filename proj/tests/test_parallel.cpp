#include <doctest.h>

#include <atomic>
#include <numbers>
#include <stdexcept>

#include "jch/parallel.hpp"
#include "jch/sector_hamiltonian.hpp"
#include "jch/secular.hpp"

using namespace jch;

TEST_SUITE("parallel") {
  TEST_CASE("every index runs once on both paths") {
    for (auto exec : {Execution::serial, Execution::parallel}) {
      std::vector<std::atomic<int>> hits(257);
      for_each_index(hits.size(), exec, [&](std::size_t i) { hits[i]++; });
      for (const auto& h : hits) CHECK(h.load() == 1);
    }
  }

  TEST_CASE("the lowest failing index is rethrown") {
    for (auto exec : {Execution::serial, Execution::parallel}) {
      try {
        for_each_index(64, exec, [](std::size_t i) {
          if (i == 9 || i == 40) throw std::runtime_error("item " + std::to_string(i));
        });
        FAIL("expected a throw");
      } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "item 9");
      }
    }
  }

  TEST_CASE("thread cap round trip") {
    const int before = thread_cap();
    set_thread_cap(2);
    CHECK(thread_cap() == 2);
    set_thread_cap(0);
    CHECK(thread_cap() >= 1);
    set_thread_cap(before);
  }

  TEST_CASE("sector sweep: parallel equals serial bitwise") {
    std::vector<ModelParams> grid;
    for (double g : {0.5, 2.0, 5.0}) grid.push_back(validate_params({24, 0.0, 1.0, g}));
    std::vector<SectorIndex> sectors;
    for (int p = 0; p < 24; p += 3) sectors.push_back(SectorIndex{p});
    const auto a = sector_sweep(grid, sectors, {}, Execution::serial);
    const auto b = sector_sweep(grid, sectors, {}, Execution::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].eigenvalues == b[i].eigenvalues);
      CHECK(a[i].spurious_flags == b[i].spurious_flags);
      for (std::size_t v = 0; v < a[i].size(); ++v) CHECK(a[i].coefficient_vectors[v] == b[i].coefficient_vectors[v]);
    }
  }

  TEST_CASE("band sampling: parallel equals serial bitwise") {
    const auto a = continuum_bands(0.3, 1.0, 1.9, 1.1, 4096, Execution::serial);
    const auto b = continuum_bands(0.3, 1.0, 1.9, 1.1, 4096, Execution::parallel);
    for (auto [x, y] : {std::pair{a.lower, b.lower}, std::pair{a.mixed, b.mixed}, std::pair{a.upper, b.upper}}) {
      CHECK(x.lo == y.lo);
      CHECK(x.hi == y.hi);
      CHECK(x.lo_theta == y.lo_theta);
      CHECK(x.hi_theta == y.hi_theta);
    }
  }

  TEST_CASE("critical curve: parallel equals serial bitwise") {
    std::vector<double> angles{0.0, 0.7, 2.0, std::numbers::pi, 5.5};
    const auto a = critical_coupling_curve(angles, 0.0, kDefaultBandResolution, kCriticalTolerance, Execution::serial);
    const auto b = critical_coupling_curve(angles, 0.0, kDefaultBandResolution, kCriticalTolerance, Execution::parallel);
    for (std::size_t i = 0; i < angles.size(); ++i) {
      CHECK(a[i].ok == b[i].ok);
      CHECK(a[i].value.upper == b[i].value.upper);
      CHECK(a[i].value.lower == b[i].value.lower);
    }
  }
}
