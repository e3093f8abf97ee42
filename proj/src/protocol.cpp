#include "ccbench/error.hpp"
#include "ccbench/harness.hpp"

namespace ccbench {

namespace {

nlohmann::json parse_object(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("unparseable protocol line: ") + e.what());
  }
  if (!j.is_object()) throw ProtocolError("protocol line is not a JSON object");
  if (!j.contains("id") || !j["id"].is_number_unsigned()) {
    throw ProtocolError("protocol object lacks a non-negative integer 'id'");
  }
  return j;
}

}  // namespace

std::string encode_request(const SolverRequest& r) {
  nlohmann::json j = {{"id", r.id}, {"prompt", r.prompt}, {"h_max", r.h_max}};
  return j.dump();
}

std::string encode_response(const SolverResponse& r) {
  nlohmann::json j = {{"id", r.id}, {"path", r.path}};
  return j.dump();
}

SolverRequest decode_request(std::string_view line) {
  const auto j = parse_object(line);
  if (!j.contains("prompt") || !j["prompt"].is_string()) {
    throw ProtocolError("request lacks a string 'prompt'");
  }
  if (!j.contains("h_max") || !j["h_max"].is_number_unsigned()) {
    throw ProtocolError("request lacks a non-negative integer 'h_max'");
  }
  return {j["id"].get<std::uint64_t>(), j["prompt"].get<std::string>(),
          j["h_max"].get<std::size_t>()};
}

SolverResponse decode_response(std::string_view line) {
  const auto j = parse_object(line);
  if (!j.contains("path") || !j["path"].is_string()) {
    throw ProtocolError("response lacks a string 'path'");
  }
  return {j["id"].get<std::uint64_t>(), j["path"].get<std::string>()};
}

}  // namespace ccbench
