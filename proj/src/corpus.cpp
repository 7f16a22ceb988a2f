#include "memsfbp/corpus.hpp"

#include <cmath>

namespace memsfbp {

namespace {

// Smooth pinned bump shapes on [-1, 1], all nonnegative.
double s_para(double x) { return 1.0 - x * x; }
double s_quart(double x) { return (1.0 - x * x) * (1.0 - x * x); }
double s_cos(double x) { return (1.0 - x * x) * (2.0 + std::cos(M_PI * x)) / 3.0; }
double s_skew(double x) { return (1.0 - x * x) * (1.0 + 0.4 * std::sin(M_PI * x)); }

struct CorpusEntry {
    double a;             // upper amplitude
    double b;             // lower amplitude
    double (*su)(double);
    double (*sv)(double);
};

} // namespace

std::vector<MembraneState> bundled_corpus(const Grid1D& g) {
    static const CorpusEntry entries[] = {
        {0.00, 0.00, s_para, s_para},   // rest state
        {0.05, 0.00, s_para, s_para},
        {0.00, 0.05, s_para, s_para},
        {0.10, 0.10, s_para, s_para},
        {0.20, 0.20, s_para, s_para},
        {0.30, 0.30, s_para, s_para},
        {0.40, 0.40, s_para, s_para},
        {0.45, 0.30, s_para, s_para},
        {0.15, 0.45, s_para, s_para},
        {0.25, 0.25, s_quart, s_quart},
        {0.40, 0.20, s_quart, s_para},
        {0.20, 0.40, s_para, s_quart},
        {0.30, 0.15, s_cos, s_para},
        {0.15, 0.30, s_para, s_cos},
        {0.35, 0.35, s_cos, s_cos},
        {0.20, 0.20, s_skew, s_para},   // asymmetric from here on
        {0.20, 0.20, s_para, s_skew},
        {0.30, 0.25, s_skew, s_skew},
        {0.40, 0.15, s_skew, s_quart},
        {0.10, 0.45, s_quart, s_skew},
        {0.50, 0.10, s_para, s_quart},
        {0.10, 0.50, s_quart, s_para},
        {0.55, 0.25, s_quart, s_quart},
        {0.25, 0.55, s_quart, s_quart},
    };

    std::vector<MembraneState> corpus;
    corpus.reserve(std::size(entries));
    for (const CorpusEntry& e : entries) {
        corpus.push_back(sample_state(
            g, [&](double x) { return -e.a * e.su(x); },
            [&](double x) { return -1.0 + e.b * e.sv(x); }));
    }
    return corpus;
}

} // namespace memsfbp
