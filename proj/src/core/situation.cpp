#include <string>

#include "kljn/core.hpp"
#include "kljn/errors.hpp"

namespace kljn {

BitSituation BitSituation::from_index(int index) {
    if (index < 0 || index > 3) throw InvalidParameter("situation index out of range");
    return {index / 2, index % 2};
}

BitSituation parse_situation(std::string_view text) {
    if (text == "00") return BitSituation::s00();
    if (text == "01") return BitSituation::s01();
    if (text == "10") return BitSituation::s10();
    if (text == "11") return BitSituation::s11();
    throw InvalidParameter("unknown situation '" + std::string(text) + "' (expected 00, 01, 10 or 11)");
}

std::string_view to_string(BitSituation s) {
    static constexpr std::string_view names[] = {"00", "01", "10", "11"};
    return names[s.index()];
}

Observable parse_observable(std::string_view text) {
    if (text == "voltage") return Observable::Voltage;
    if (text == "current") return Observable::Current;
    throw InvalidParameter("unknown observable '" + std::string(text) + "' (expected voltage or current)");
}

std::string_view to_string(Observable o) { return o == Observable::Voltage ? "voltage" : "current"; }

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Decide00: return "decide_00";
        case Decision::DecideSecure: return "decide_secure";
        case Decision::Decide11: return "decide_11";
    }
    return "?";
}

std::string_view to_string(ErrorClass e) {
    switch (e) {
        case ErrorClass::Correct: return "correct";
        case ErrorClass::AutoRemoved: return "auto_removed";
        case ErrorClass::Error00ToSecure: return "error_00_to_secure";
        case ErrorClass::Error11ToSecure: return "error_11_to_secure";
    }
    return "?";
}

Inverter parse_inverter(std::string_view text) {
    if (text == "alice") return Inverter::Alice;
    if (text == "bob") return Inverter::Bob;
    throw InvalidParameter("unknown inverter '" + std::string(text) + "' (expected alice or bob)");
}

}  // namespace kljn
