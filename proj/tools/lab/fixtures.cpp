#include "lab/fixtures.hpp"

#include <sstream>

#include "multavg/arith.hpp"

namespace multavg::lab {

const std::vector<Recipe>& recipes() {
    static const std::vector<Recipe> list = {
        {1, "parity-u2", "U^2 norm of the parity function on Z_1000 and Z_1001",
         "kind = gowers\n[functions]\nf = parity\n[checkpoints]\nvalues = 1000, 1001\n[gowers]\ns = 2\n"},
        {2, "archimedean-mean", "mean of n^i against N^i/(1+i)",
         "kind = mean\n[functions]\nf = archimedean(1)\n[checkpoints]\nvalues = 1000, 10000, 100000\n"
         "[params]\nmode = manual\nt = 1\n"},
        {3, "two-adic-mean", "mean of two_adic_sign against its Euler product 1/3",
         "kind = mean\n[functions]\nf = two_adic_sign\n[checkpoints]\nvalues = 1000, 10000, 100000\n"},
        {4, "archimedean-conjugate-pair", "conjugate-pair average of n^{2 pi i} on (x+y, x+2y)",
         "kind = ergodic\n[forms]\nL = [1,1]\n[conj_forms]\nL = [1,2]\n[checkpoints]\nvalues = 1000, 2000, 4000\n"
         "[ergodic]\nc = 1\nF = 1 : 1\nG = -1 : 1\n"},
        {5, "log-rotation-counterexample", "non-convergent averages of n^{2 pi i}",
         "kind = counterexample\n[checkpoints]\nvalues = 1000, 10000, 16488, 100000\n[ergodic]\nc = 1\n"},
        {6, "gowers-paths", "recursive and spectral Gowers norms on a random sign sequence",
         "kind = gowers\nseed = 7\n[functions]\nf = random_pm1\n[checkpoints]\nvalues = 64, 127, 256\n"
         "[gowers]\ns = 3\nmethod = compare\n"},
        {7, "kernel-decomposition", "kernel invariants and f = f_st + f_un for liouville",
         "kind = decompose\n[functions]\nf = liouville\n[checkpoints]\nvalues = 101, 211, 401\n"
         "[kernel]\nQ = 3\nV = 2\n"},
        {8, "partial-sum-lemma", "Fourier-weighted means of n^i at alpha = 0, 1, 3",
         "kind = verify-lemma\n[functions]\nf = archimedean(1)\n[checkpoints]\nvalues = 1000, 10000, 100000\n"
         "[lemma]\nname = partial\nalpha = 0, 1, 3\nc = 0.5, -0.5\nt = 1\n"},
        {9, "liouville-three-term", "lambda(m) lambda(m+n) lambda(m+2n) over [N]^2",
         "kind = multiavg\n[functions]\nf = liouville\nf = liouville\nf = liouville\n"
         "[forms]\nL = [1,0]\nL = [1,1]\nL = [1,2]\n[checkpoints]\nvalues = 500, 1000, 2000\n"},
        {10, "ergodic-path-equivalence", "log-rotation average for frequency 2 at c = 0.25",
         "kind = ergodic\n[forms]\nL = [1,1]\n[conj_forms]\nL = [1,2]\n[checkpoints]\nvalues = 500, 2000\n"
         "[ergodic]\nc = 0.25\nF = 2 : 1\nG = -2 : 1\n"},
    };
    return list;
}

const std::vector<ExampleSystem>& example_systems() {
    static const std::vector<ExampleSystem> list = {
        {"box-2d", "independent coordinates, A_N factors into two means", {"[1,0]", "[0,1]"}},
        {"sum-pair", "x + y against x + 2y", {"[1,1]", "[1,2]"}},
        {"three-term-ap", "m, m + n, m + 2n", {"[1,0]", "[1,1]", "[1,2]"}},
        {"four-term-ap", "m, m + n, m + 2n, m + 3n", {"[1,0]", "[1,1]", "[1,2]", "[1,3]"}},
        {"shifted-pair", "n and n + 1 (dependent, one variable)", {"[1] + 0", "[1] + 1"}},
        {"cube-3d", "x + y, y + z, x + z", {"[1,1,0]", "[0,1,1]", "[1,0,1]"}},
    };
    return list;
}

std::string list_fixtures() {
    std::ostringstream out;
    out << "multavg fixtures v" << kCatalogVersion << "\n\n[builtins]\n";
    for (const auto& name : builtin_names()) out << name << "\n";
    out << "table:<path>\n";
    out << "\n[systems]\n";
    for (const auto& s : example_systems()) {
        out << s.id << ":";
        for (const auto& f : s.forms) out << " " << f << ";";
        out << " " << s.description << "\n";
    }
    out << "\n[recipes]\n";
    for (const auto& r : recipes()) {
        out << "AC" << r.criterion << " " << r.id << ": " << r.title << "\n";
        std::istringstream lines(r.config);
        for (std::string line; std::getline(lines, line);) out << "    " << line << "\n";
    }
    return out.str();
}

} // namespace multavg::lab
