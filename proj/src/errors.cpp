#include "interleave/errors.hpp"

namespace interleave {

MalformedTags::MalformedTags(std::size_t offset, const std::string& what)
    : Error("malformed tags at byte " + std::to_string(offset) + ": " + what), offset_(offset) {}

CacheCorrupt::CacheCorrupt(std::size_t line, const std::string& what)
    : Error("replay cache line " + std::to_string(line) + ": " + what), line_(line) {}

SchemaError::SchemaError(std::size_t line, const std::string& what)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

}  // namespace interleave
