// Times parallel select_st against the serial reference on synthetic data.
//
//   bench_select [trajectories] [points] [repeats]

#include "stq/evaluator.hpp"
#include "stq/predicate.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

using namespace stq;

namespace {

TrajectoriesRelation synthetic(int count, int points, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> start(0.0, 100.0);
    std::normal_distribution<double> step(0.0, 2.0);
    TrajectoriesRelation rel;
    for (int i = 0; i < count; ++i) {
        std::vector<TrajectoryPoint> pts;
        double x = start(rng), y = start(rng), tau = 0.0;
        for (int k = 0; k < points; ++k) {
            pts.push_back({k, x, y, tau});
            x += step(rng);
            y += step(rng);
            tau += 1.0;
        }
        rel.add("t" + std::to_string(i), Trajectory::from_points(std::move(pts)));
    }
    return rel;
}

template <typename F>
double best_ms(int repeats, F&& f)
{
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main(int argc, char** argv)
{
    const int count = argc > 1 ? std::atoi(argv[1]) : 20000;
    const int points = argc > 2 ? std::atoi(argv[2]) : 50;
    const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

    const auto rel = synthetic(count, points, 42);
    EvalEnv env;
    env.bind("R", Region::make(30, 30, 70, 70));
    env.bind("I", Interval::make(10, 30));
    const auto ast = parse_predicate("pf OUTSIDE R AND (EXISTS p IN TFL: p INSIDE R AND p WITHIN I)");

    for (const auto& s : {Strictness::strict(), Strictness::relaxed(), Strictness::approximated("uniform", 10)}) {
        std::size_t n_par = 0, n_ser = 0;
        const double par = best_ms(repeats, [&] { n_par = select_st(rel, ast, env, s).size(); });
        const double ser = best_ms(repeats, [&] { n_ser = select_st_serial(rel, ast, env, s).size(); });
        std::printf("%-14s rows=%d points=%d selected=%zu serial=%.1fms parallel=%.1fms speedup=%.2fx%s\n",
                    s.to_string().c_str(), count, points, n_par, ser, par, ser / par,
                    n_par == n_ser ? "" : "  MISMATCH");
        if (n_par != n_ser)
            return 1;
    }
    return 0;
}
