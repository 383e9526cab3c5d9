#include <fstream>

#include <json.hpp>

#include "owcpark/io.hpp"

namespace owc {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::runtime_error("expected [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json cvec_to_json(const CVec& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
    return out;
}

CVec cvec_from_json(const json& j) {
    CVec v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = complex_from_json(j[static_cast<std::size_t>(i)]);
    return v;
}

json cmat_to_json(const CMat& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
        out.push_back(row);
    }
    return out;
}

CMat cmat_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return CMat(0, 0);
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    CMat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = complex_from_json(j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    return m;
}

json mat_to_json(const Mat& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        out.push_back(row);
    }
    return out;
}

Mat mat_from_json(const json& j) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Mat(0, 0);
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    return m;
}

void write_json(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << j.dump(1) << "\n";
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

} // namespace

void save_body_hydro(const std::filesystem::path& path, const BodyHydro& body, double omega) {
    json j;
    j["omega"] = omega;
    j["order"] = body.order;
    j["radius"] = body.radius;
    j["dtm"] = cmat_to_json(body.dtm);
    j["radiated"] = cvec_to_json(body.radiated);
    j["excitation_row"] = cvec_to_json(body.excitation_row);
    j["self_added_mass"] = body.self_added_mass;
    j["self_damping"] = body.self_damping;
    j["mass"] = body.mass;
    j["damping"] = body.damping;
    j["stiffness"] = body.stiffness;
    j["is_pile"] = body.is_pile;
    write_json(path, j);
}

BodyHydro load_body_hydro(const std::filesystem::path& path, double* omega) {
    const json j = read_json(path);
    BodyHydro b;
    b.order = j.at("order").get<int>();
    b.radius = j.at("radius").get<double>();
    b.dtm = cmat_from_json(j.at("dtm"));
    b.radiated = cvec_from_json(j.at("radiated"));
    b.excitation_row = cvec_from_json(j.at("excitation_row"));
    b.self_added_mass = j.at("self_added_mass").get<double>();
    b.self_damping = j.at("self_damping").get<double>();
    b.mass = j.at("mass").get<double>();
    b.damping = j.at("damping").get<double>();
    b.stiffness = j.at("stiffness").get<double>();
    b.is_pile = j.at("is_pile").get<bool>();
    if (b.dtm.rows() != b.modes() || b.radiated.size() != b.modes() ||
        b.excitation_row.size() != b.modes())
        throw std::runtime_error(path.string() + ": dimensions inconsistent with the order");
    if (omega) *omega = j.at("omega").get<double>();
    return b;
}

void save_park_layout(const std::filesystem::path& path,
                      const std::vector<ParkLayoutEntry>& bodies) {
    json arr = json::array();
    for (const auto& b : bodies)
        arr.push_back({{"x", b.x}, {"y", b.y}, {"kind", b.is_pile ? "pile" : "device"}});
    write_json(path, json{{"bodies", arr}});
}

std::vector<ParkLayoutEntry> load_park_layout(const std::filesystem::path& path) {
    const json j = read_json(path);
    std::vector<ParkLayoutEntry> out;
    for (const auto& e : j.at("bodies")) {
        const std::string kind = e.at("kind").get<std::string>();
        if (kind != "device" && kind != "pile")
            throw std::runtime_error(path.string() + ": body kind must be device or pile");
        out.push_back({e.at("x").get<double>(), e.at("y").get<double>(), kind == "pile"});
    }
    return out;
}

void save_interaction_matrices(const std::filesystem::path& path, const InteractionMatrices& im,
                               double omega) {
    json j;
    j["n"] = im.added_mass.rows();
    j["omega"] = omega;
    j["A"] = mat_to_json(im.added_mass);
    j["B"] = mat_to_json(im.damping);
    j["excitation"] = cvec_to_json(im.excitation);
    write_json(path, j);
}

InteractionMatrices load_interaction_matrices(const std::filesystem::path& path, double* omega) {
    const json j = read_json(path);
    InteractionMatrices im;
    im.added_mass = mat_from_json(j.at("A"));
    im.damping = mat_from_json(j.at("B"));
    im.excitation = cvec_from_json(j.at("excitation"));
    const auto n = j.at("n").get<Eigen::Index>();
    if (im.added_mass.rows() != n || im.added_mass.cols() != n || im.damping.rows() != n ||
        im.damping.cols() != n || im.excitation.size() != n)
        throw std::runtime_error(path.string() + ": dimension header mismatch");
    for (Eigen::Index l = 0; l < n; ++l) im.device_index.push_back(static_cast<std::size_t>(l));
    if (omega) *omega = j.at("omega").get<double>();
    return im;
}

namespace {

json mat2x_to_json(const Mat2X& m) {
    json out = json::array();
    for (Eigen::Index i = 0; i < m.cols(); ++i) out.push_back({m(0, i), m(1, i)});
    return out;
}

Mat2X mat2x_from_json(const json& j) {
    Mat2X m(2, static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < m.cols(); ++i) {
        m(0, i) = j[static_cast<std::size_t>(i)][0].get<double>();
        m(1, i) = j[static_cast<std::size_t>(i)][1].get<double>();
    }
    return m;
}

} // namespace

void save_layout_record(const std::filesystem::path& path, const LayoutRecord& rec) {
    json j;
    j["seed"] = rec.seed;
    json verts = json::array();
    for (const auto& v : rec.domain_vertices) verts.push_back({v.x(), v.y()});
    j["domain"] = {{"vertices", verts}, {"d_min", rec.d_min}};
    j["positions"] = mat2x_to_json(rec.positions);
    json powers = json::array();
    for (Eigen::Index i = 0; i < rec.per_device_power.size(); ++i)
        powers.push_back(rec.per_device_power(i));
    j["per_device_power"] = powers;
    j["total_power"] = rec.total_power;
    j["omega_t"] = rec.omega_t;
    j["wave"] = {{"hs", rec.hs}, {"te", rec.te}, {"direction", rec.direction}};
    json trace;
    trace["cost"] = rec.trace.cost;
    trace["grad_norm"] = rec.trace.grad_norm;
    trace["step_scale"] = rec.trace.step_scale;
    trace["backtracks"] = rec.trace.backtracks;
    trace["overlap_shrinks"] = rec.trace.overlap_shrinks;
    json layouts = json::array();
    for (const auto& l : rec.trace.layouts) layouts.push_back(mat2x_to_json(l));
    trace["layouts"] = layouts;
    j["trace"] = trace;
    write_json(path, j);
}

LayoutRecord load_layout_record(const std::filesystem::path& path) {
    const json j = read_json(path);
    LayoutRecord rec;
    rec.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& v : j.at("domain").at("vertices"))
        rec.domain_vertices.emplace_back(v[0].get<double>(), v[1].get<double>());
    rec.d_min = j.at("domain").at("d_min").get<double>();
    rec.positions = mat2x_from_json(j.at("positions"));
    const auto& powers = j.at("per_device_power");
    rec.per_device_power.resize(static_cast<Eigen::Index>(powers.size()));
    for (Eigen::Index i = 0; i < rec.per_device_power.size(); ++i)
        rec.per_device_power(i) = powers[static_cast<std::size_t>(i)].get<double>();
    rec.total_power = j.at("total_power").get<double>();
    rec.omega_t = j.at("omega_t").get<double>();
    rec.hs = j.at("wave").at("hs").get<double>();
    rec.te = j.at("wave").at("te").get<double>();
    rec.direction = j.at("wave").at("direction").get<double>();
    const auto& tr = j.at("trace");
    rec.trace.cost = tr.at("cost").get<std::vector<double>>();
    rec.trace.grad_norm = tr.at("grad_norm").get<std::vector<double>>();
    rec.trace.step_scale = tr.at("step_scale").get<std::vector<double>>();
    rec.trace.backtracks = tr.at("backtracks").get<std::vector<int>>();
    rec.trace.overlap_shrinks = tr.at("overlap_shrinks").get<std::vector<int>>();
    for (const auto& l : tr.at("layouts")) rec.trace.layouts.push_back(mat2x_from_json(l));
    return rec;
}

} // namespace owc
