#pragma once

// Channel <-> JSON:
//   {"emitter":  {"center": [x, y, z, t], "extent": [yx, yy, yz, s]},
//    "receiver": {"center": [...],        "extent": [...]}}

#include "pulsebeam/channel.hpp"
#include "pulsebeam/error.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace pulsebeam {

namespace detail {

inline FourVector four_vector_from_json(const nlohmann::json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 4)
        throw Error(Errc::validation, where + " must be an array of 4 numbers");
    for (const auto& v : j)
        if (!v.is_number())
            throw Error(Errc::validation, where + " must contain only numbers");
    return {{j[0].get<double>(), j[1].get<double>(), j[2].get<double>()}, j[3].get<double>()};
}

inline nlohmann::json four_vector_to_json(const FourVector& v)
{
    return nlohmann::json::array({v.space.x, v.space.y, v.space.z, v.time});
}

inline Endpoint endpoint_from_json(const nlohmann::json& j, const std::string& name)
{
    if (!j.is_object() || !j.contains("center") || !j.contains("extent"))
        throw Error(Errc::validation, name + " needs 'center' and 'extent'");
    const FourVector extent = four_vector_from_json(j.at("extent"), name + ".extent");
    if (cone_status(extent) == ConeStatus::invalid)
        throw Error(Errc::validation, name + ".extent must satisfy s > |y| or be exactly zero");
    return {RealEvent(four_vector_from_json(j.at("center"), name + ".center")), ConeVector(extent)};
}

} // namespace detail

inline nlohmann::json channel_to_json(const Channel& ch)
{
    auto endpoint = [](const Endpoint& e) {
        return nlohmann::json{{"center", detail::four_vector_to_json(e.center.vector())},
                              {"extent", detail::four_vector_to_json(e.extent.vector())}};
    };
    return {{"emitter", endpoint(ch.emitter())}, {"receiver", endpoint(ch.receiver())}};
}

inline Channel channel_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("emitter") || !j.contains("receiver"))
        throw Error(Errc::validation, "channel JSON needs 'emitter' and 'receiver' objects");
    return Channel(detail::endpoint_from_json(j.at("emitter"), "emitter"),
                   detail::endpoint_from_json(j.at("receiver"), "receiver"));
}

} // namespace pulsebeam
