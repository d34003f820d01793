// Generates tests/fixtures/genericity_counts.json: for each length n, the
// number of cyclically reduced words of F_2 with pi = 2 and Crit = {F_2},
// computed by the brute-force partition oracle (not by the library's closure
// walk). One orbit representative is classified per rotation/inversion orbit
// and weighted by orbit size. Slow by design; run once and commit the output.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <json.hpp>

#include "fgpr/agraph.hpp"
#include "fgpr/words.hpp"
#include "oracles.hpp"

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: " << argv[0] << " MAX_N OUTPUT.json\n";
        return 2;
    }
    const int max_n = std::atoi(argv[1]);
    const int rank = 2;
    const std::string rose = fgpr::canonical_form(fgpr::rose_graph(rank));

    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (int n = 2; n <= max_n; ++n) {
        std::uint64_t total = 0;
        std::uint64_t count = 0;
        auto reps = oracles::orbit_reps(rank, n);
        std::size_t done = 0;
        for (const auto& [w, weight] : reps) {
            total += weight;
            oracles::pirank_result res = oracles::partition_pirank(w, rank);
            if (res.pi && *res.pi == rank && res.crit.size() == 1 && *res.crit.begin() == rose)
                count += weight;
            if (++done % 200 == 0)
                std::cerr << "n=" << n << " " << done << "/" << reps.size() << "\r";
        }
        std::cerr << "n=" << n << " total=" << total << " count=" << count << "        \n";
        nlohmann::ordered_json row;
        row["n"] = n;
        row["total"] = total;
        row["count_pi_r_crit_whole"] = count;
        rows.push_back(row);
    }

    nlohmann::ordered_json out;
    out["rank"] = rank;
    out["rows"] = rows;
    std::ofstream f(argv[2]);
    f << out.dump(2) << "\n";
    return f ? 0 : 1;
}
