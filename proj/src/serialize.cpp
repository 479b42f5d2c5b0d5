#include "heckmort/serialize.hpp"

#include <json.hpp>

namespace heckmort {

std::string series_to_json(const QSeries& s) {
    nlohmann::ordered_json j;
    j["precision"] = {s.precision().num(), s.precision().den()};
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [e, c] : s.terms()) {
        terms.push_back({e.num(), e.den(), c.get_num().get_str(), c.get_den().get_str()});
    }
    j["terms"] = std::move(terms);
    return j.dump();
}

QSeries series_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Exponent prec(j.at("precision").at(0).get<std::int64_t>(),
                  j.at("precision").at(1).get<std::int64_t>());
    QSeries s(prec);
    for (const auto& t : j.at("terms")) {
        Exponent e(t.at(0).get<std::int64_t>(), t.at(1).get<std::int64_t>());
        Coeff num(t.at(2).get<std::string>());
        Coeff den(t.at(3).get<std::string>());
        s.add_term(e, num / den);
    }
    return s;
}

}  // namespace heckmort
