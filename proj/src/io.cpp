#include "owcpark/io.hpp"

namespace owc {

CharacteristicCurves load_turbine_curves(const std::filesystem::path& path, double fit_tol,
                                         int max_half_degree) {
    const auto t = read_csv(path, {"phi", "Ca", "Ct"});
    std::vector<double> phi, ca, ct;
    for (const auto& r : t.rows) {
        phi.push_back(r[0]);
        ca.push_back(r[1]);
        ct.push_back(r[2]);
    }
    return CharacteristicCurves(std::move(phi), std::move(ca), std::move(ct), fit_tol,
                                max_half_degree);
}

CavitationTable load_cavitation_table(const std::filesystem::path& path) {
    const auto t = read_csv(path, {"phi", "Cpmin"});
    std::vector<double> phi, cp;
    for (const auto& r : t.rows) {
        phi.push_back(r[0]);
        cp.push_back(r[1]);
    }
    return CavitationTable(std::move(phi), std::move(cp));
}

HydroCoefficients load_hydro_coefficients(const std::filesystem::path& path) {
    const auto t = read_csv(path, {"omega", "A", "B", "Re_pe", "Im_pe"});
    auto norm = HydroCoefficients::Normalization::per_unit_amplitude;
    bool declared = false;
    for (const auto& c : t.comments) {
        if (c.find("normalization:") == std::string::npos) continue;
        declared = true;
        if (c.find("per-unit-amplitude") != std::string::npos)
            norm = HydroCoefficients::Normalization::per_unit_amplitude;
        else if (c.find("absolute") != std::string::npos)
            norm = HydroCoefficients::Normalization::absolute;
        else
            throw std::runtime_error(path.string() + ": unknown excitation normalization");
    }
    if (!declared)
        throw std::runtime_error(path.string() +
                                 ": missing '# normalization: ...' header declaration");
    std::vector<double> w, a, b;
    std::vector<Complex> pe;
    for (const auto& r : t.rows) {
        w.push_back(r[0]);
        a.push_back(r[1]);
        b.push_back(r[2]);
        pe.emplace_back(r[3], r[4]);
    }
    return HydroCoefficients(std::move(w), std::move(a), std::move(b), std::move(pe), norm);
}

ScatterDiagram load_scatter_diagram(const std::filesystem::path& path) {
    const auto t = read_csv(path, {"Hs", "Te", "occurrence"});
    std::vector<SeaState> cells;
    for (const auto& r : t.rows) cells.emplace_back(r[0], r[1], r[2]);
    return ScatterDiagram(std::move(cells));
}

void write_time_series(const std::filesystem::path& path, const TimeSeries& ts) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(ts.t.size()));
    for (Eigen::Index i = 0; i < ts.t.size(); ++i)
        rows.push_back({ts.t(i), ts.zeta(i), ts.zetadot(i), ts.flow(i), ts.dp(i), ts.torque(i),
                        ts.power(i), ts.pmin(i)});
    write_csv(path, {}, {"t", "zeta", "zetadot", "Q", "dp", "torque", "P", "pmin"}, rows);
}

} // namespace owc
