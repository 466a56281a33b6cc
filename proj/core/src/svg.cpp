#include <algorithm>
#include <array>
#include <cstdio>
#include <ostream>
#include <string>

#include "groupmac/harness.hpp"

namespace groupmac {

namespace {

constexpr double kWidth = 720;
constexpr double kHeight = 440;
constexpr double kLeft = 64;
constexpr double kRight = 150;
constexpr double kTop = 40;
constexpr double kBottom = 48;

constexpr std::array<const char*, 4> kColors{"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string fixed(double v, int digits = 2) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

// Mean over replications at every evaluated round; a replication that
// stopped early keeps contributing its last value.
std::vector<std::pair<std::size_t, double>> averaged_curve(const ExperimentReport& report) {
    std::vector<const TrainingCurve*> curves;
    for (const auto& run : report.runs) {
        if (run.training && !run.training->curve.empty()) curves.push_back(&run.training->curve);
    }
    std::vector<std::size_t> rounds;
    for (const auto* c : curves) {
        for (const auto& p : *c) rounds.push_back(p.round);
    }
    std::sort(rounds.begin(), rounds.end());
    rounds.erase(std::unique(rounds.begin(), rounds.end()), rounds.end());

    std::vector<std::pair<std::size_t, double>> out;
    std::vector<std::size_t> cursor(curves.size(), 0);
    for (std::size_t r : rounds) {
        double total = 0.0;
        for (std::size_t i = 0; i < curves.size(); ++i) {
            const auto& c = *curves[i];
            while (cursor[i] + 1 < c.size() && c[cursor[i] + 1].round <= r) ++cursor[i];
            total += c[cursor[i]].exact_success;
        }
        out.emplace_back(r, total / static_cast<double>(curves.size()));
    }
    return out;
}

}  // namespace

void write_success_svg(std::ostream& out, const ExperimentReport& report, const std::string& title) {
    const auto mab = averaged_curve(report);
    const double max_round = mab.empty() ? 1.0 : static_cast<double>(std::max<std::size_t>(mab.back().first, 1));
    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto x_of = [&](double round) { return kLeft + plot_w * round / max_round; };
    auto y_of = [&](double v) { return kTop + plot_h * (1.0 - v); };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kLeft << "\" y=\"24\" font-size=\"14\">" << escape(title) << "</text>\n";

    for (int i = 0; i <= 5; ++i) {
        const double v = i / 5.0;
        out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << fixed(y_of(v))
            << "\" y2=\"" << fixed(y_of(v)) << "\" stroke=\"#ddd\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(y_of(v) + 4) << "\" text-anchor=\"end\">"
            << fixed(v, 1) << "</text>\n";
    }
    for (int i = 0; i <= 4; ++i) {
        const double r = max_round * i / 4.0;
        out << "<text x=\"" << fixed(x_of(r)) << "\" y=\"" << kTop + plot_h + 18
            << "\" text-anchor=\"middle\">" << fixed(r, 0) << "</text>\n";
    }
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 8
        << "\" text-anchor=\"middle\">training round</text>\n";
    out << "<text transform=\"translate(16 " << kTop + plot_h / 2
        << ") rotate(-90)\" text-anchor=\"middle\">success probability</text>\n";

    std::size_t legend = 0;
    auto legend_entry = [&](const std::string& label, const char* color) {
        const double y = kTop + 12 + 20.0 * static_cast<double>(legend++);
        const double x = kLeft + plot_w + 12;
        out << "<line x1=\"" << x << "\" x2=\"" << x + 24 << "\" y1=\"" << y << "\" y2=\"" << y << "\" stroke=\""
            << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << x + 30 << "\" y=\"" << y + 4 << "\">" << escape(label) << "</text>\n";
    };

    for (const auto& row : report.summary) {
        const char* color = kColors[static_cast<std::size_t>(row.solver)];
        if (row.solver == SolverKind::mab) {
            if (mab.empty()) continue;
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < mab.size(); ++i) {
                if (i) out << ' ';
                out << fixed(x_of(static_cast<double>(mab[i].first))) << ',' << fixed(y_of(mab[i].second));
            }
            out << "\"/>\n";
        } else {
            out << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + plot_w << "\" y1=\"" << fixed(y_of(row.mean))
                << "\" y2=\"" << fixed(y_of(row.mean)) << "\" stroke=\"" << color
                << "\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\"/>\n";
        }
        legend_entry(to_string(row.solver) + " " + fixed(row.mean, 4), color);
    }
    out << "</svg>\n";
}

}  // namespace groupmac
