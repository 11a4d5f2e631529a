#pragma once

#include "cpcross/io.hpp"

#include <string>

#ifndef CPCROSS_FIXTURE_DIR
#error "CPCROSS_FIXTURE_DIR must point at the fixtures directory"
#endif

namespace fx {

inline std::string path(const std::string& file)
{
    return std::string(CPCROSS_FIXTURE_DIR) + "/" + file;
}

inline cpcross::GraphDocument graph(const std::string& name)
{
    return cpcross::load_graph(path(name + ".json"));
}

}  // namespace fx
