#include "liegan/serialize.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace liegan {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) {
            if (m.is_complex())
                row.push_back(json::array({m.re(i, j), m.im(i, j)}));
            else
                row.push_back(m.re(i, j));
        }
        rows.push_back(std::move(row));
    }
    return json{{"field", field_name(m.field())}, {"rows", m.rows()}, {"cols", m.cols()},
                {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
    const std::string f = j.at("field").get<std::string>();
    if (f != "real" && f != "complex") throw std::runtime_error("matrix json: unknown field tag " + f);
    const Field field = f == "complex" ? Field::Complex : Field::Real;
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const json& data = j.at("data");
    if (static_cast<int>(data.size()) != rows) throw std::runtime_error("matrix json: row count mismatch");
    Matrix m(rows, cols, field);
    for (int i = 0; i < rows; ++i) {
        const json& row = data.at(static_cast<std::size_t>(i));
        if (static_cast<int>(row.size()) != cols)
            throw std::runtime_error("matrix json: column count mismatch");
        for (int c = 0; c < cols; ++c) {
            const json& cell = row.at(static_cast<std::size_t>(c));
            if (field == Field::Complex) {
                m.set(i, c, {cell.at(0).get<double>(), cell.at(1).get<double>()});
            } else {
                m.re(i, c) = cell.get<double>();
            }
        }
    }
    return m;
}

void save_matrix(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_matrix: cannot open " + path.string());
    out << matrix_to_json(m).dump(2) << "\n";
}

Matrix load_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_matrix: cannot open " + path.string());
    json j;
    in >> j;
    return matrix_from_json(j);
}

json basis_to_json(const LieBasis& basis, const CoefficientDistribution& dist) {
    basis.validate();
    json structure;
    if (basis.structure == BasisStructure::Dense)
        structure = json{{"kind", "dense"}};
    else
        structure = json{{"kind", "block_diag_repeat"}, {"block_size", basis.block_size}};

    json d;
    if (dist.kind == CoefficientDistribution::Kind::Gaussian)
        d = json{{"kind", "gaussian"}, {"sigma", dist.sigma}, {"learnable", dist.learnable}};
    else
        d = json{{"kind", "uniform_int_grid"}, {"lo", dist.grid_lo}, {"hi", dist.grid_hi}};

    json mats = json::array();
    for (const Matrix& m : basis.mats) mats.push_back(matrix_to_json(m));
    return json{{"channels", basis.channels}, {"dim", basis.dim}, {"field", field_name(basis.field)},
                {"structure", std::move(structure)}, {"distribution", std::move(d)},
                {"mats", std::move(mats)}};
}

std::pair<LieBasis, CoefficientDistribution> basis_from_json(const json& j) {
    LieBasis b;
    b.channels = j.at("channels").get<int>();
    b.dim = j.at("dim").get<int>();
    b.field = j.at("field").get<std::string>() == "complex" ? Field::Complex : Field::Real;
    const json& st = j.at("structure");
    if (st.at("kind").get<std::string>() == "block_diag_repeat") {
        b.structure = BasisStructure::BlockDiagRepeat;
        b.block_size = st.at("block_size").get<int>();
    }
    for (const json& m : j.at("mats")) b.mats.push_back(matrix_from_json(m));
    b.validate();

    CoefficientDistribution dist;
    const json& d = j.at("distribution");
    if (d.at("kind").get<std::string>() == "gaussian") {
        dist = CoefficientDistribution::gaussian(d.at("sigma").get<std::vector<double>>(),
                                                 d.at("learnable").get<bool>());
    } else {
        dist = CoefficientDistribution::uniform_int_grid(d.at("lo").get<long>(), d.at("hi").get<long>());
    }
    dist.validate(b.channels);
    return {std::move(b), std::move(dist)};
}

void save_basis(const std::filesystem::path& path, const LieBasis& basis,
                const CoefficientDistribution& dist) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_basis: cannot open " + path.string());
    out << basis_to_json(basis, dist).dump(2) << "\n";
}

std::pair<LieBasis, CoefficientDistribution> load_basis(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_basis: cannot open " + path.string());
    json j;
    in >> j;
    return basis_from_json(j);
}

} // namespace liegan
