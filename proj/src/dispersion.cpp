#include "upconv/dispersion.hpp"

#include "upconv/errors.hpp"
#include "upconv_builtin_sellmeier.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace upconv {

namespace {

using nlohmann::json;

constexpr std::size_t kJundtCoefficientCount = 10;

std::string format_range(const Range& r) {
    std::ostringstream os;
    os << "[" << r.lo << ", " << r.hi << "]";
    return os.str();
}

Range parse_range(const json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2) {
        throw ConfigError(std::string("sellmeier: '") + key + "' must be a two-element array");
    }
    Range r{j.at(key)[0].get<double>(), j.at(key)[1].get<double>()};
    if (!(r.lo < r.hi)) {
        throw ConfigError(std::string("sellmeier: '") + key + "' must be increasing");
    }
    return r;
}

}  // namespace

const SellmeierModel& congruent_ln_e() {
    static const SellmeierModel model = parse_sellmeier_json(detail::kBuiltinSellmeierJson);
    return model;
}

SellmeierModel parse_sellmeier_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("sellmeier: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("sellmeier: top level must be an object");
    for (const auto& [key, value] : j.items()) {
        if (key != "name" && key != "form" && key != "reference" && key != "coefficients" &&
            key != "wavelength_range_um" && key != "temperature_range_c") {
            throw ConfigError("sellmeier: unknown key '" + key + "'");
        }
    }

    SellmeierModel model;
    try {
        model.name = j.at("name").get<std::string>();
        model.temperature_form = j.value("form", std::string("jundt-ln-e"));
        model.coefficients = j.at("coefficients").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("sellmeier: ") + e.what());
    }
    if (model.temperature_form != "jundt-ln-e") {
        throw ConfigError("sellmeier: unsupported form '" + model.temperature_form + "'");
    }
    if (model.coefficients.size() != kJundtCoefficientCount) {
        throw ConfigError("sellmeier: form 'jundt-ln-e' needs 10 coefficients");
    }
    model.wavelength_range_um = parse_range(j, "wavelength_range_um");
    model.temperature_range_c = parse_range(j, "temperature_range_c");
    return model;
}

SellmeierModel load_sellmeier_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open sellmeier file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sellmeier_json(buf.str());
}

std::string sellmeier_to_json(const SellmeierModel& model) {
    json j{
        {"name", model.name},
        {"form", model.temperature_form},
        {"coefficients", model.coefficients},
        {"wavelength_range_um", {model.wavelength_range_um.lo, model.wavelength_range_um.hi}},
        {"temperature_range_c", {model.temperature_range_c.lo, model.temperature_range_c.hi}},
    };
    return j.dump(2);
}

double refractive_index(const SellmeierModel& model, double wavelength_um, double temperature_c) {
    if (!std::isfinite(wavelength_um) || !model.wavelength_range_um.contains(wavelength_um)) {
        std::ostringstream os;
        os << "wavelength " << wavelength_um << " um outside valid range "
           << format_range(model.wavelength_range_um) << " um of '" << model.name << "'";
        throw DomainError(os.str());
    }
    if (!std::isfinite(temperature_c) || !model.temperature_range_c.contains(temperature_c)) {
        std::ostringstream os;
        os << "temperature " << temperature_c << " C outside valid range "
           << format_range(model.temperature_range_c) << " C of '" << model.name << "'";
        throw DomainError(os.str());
    }

    const auto& c = model.coefficients;
    const double a1 = c[0], a2 = c[1], a3 = c[2], a4 = c[3], a5 = c[4], a6 = c[5];
    const double b1 = c[6], b2 = c[7], b3 = c[8], b4 = c[9];

    const double f = (temperature_c - 24.5) * (temperature_c + 570.82);
    const double l2 = wavelength_um * wavelength_um;
    const double uv_pole = a3 + b3 * f;
    const double n2 = a1 + b1 * f + (a2 + b2 * f) / (l2 - uv_pole * uv_pole) +
                      (a4 + b4 * f) / (l2 - a5 * a5) - a6 * l2;
    if (!(n2 > 0.0)) {
        throw DomainError("sellmeier '" + model.name + "' yields non-positive n^2");
    }
    return std::sqrt(n2);
}

double WaveguideIndexModel::delta_n_at(double wavelength_um) const noexcept {
    for (const auto& b : bands) {
        if (b.band_um.contains(wavelength_um)) return b.delta_n;
    }
    return default_delta_n;
}

void WaveguideIndexModel::validate() const {
    auto check = [](double dn) {
        if (!(dn >= -0.1 && dn <= 0.1)) {
            std::ostringstream os;
            os << "delta_n " << dn << " outside [-0.1, 0.1]";
            throw DomainError(os.str());
        }
    };
    check(default_delta_n);
    for (const auto& b : bands) {
        check(b.delta_n);
        if (!(b.band_um.lo <= b.band_um.hi)) throw DomainError("delta_n band must have lo <= hi");
    }
}

double effective_index(const WaveguideIndexModel& model, double wavelength_um, double temperature_c) {
    return refractive_index(model.bulk, wavelength_um, temperature_c) + model.delta_n_at(wavelength_um);
}

}  // namespace upconv
