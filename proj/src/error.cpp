// Copyright Contributors to the EigenGS Project
// SPDX-License-Identifier: Apache-2.0

#include "eigengs/error.hpp"

namespace eigengs {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::CorpusEmpty: return "CorpusEmpty";
    case ErrorKind::ChannelMismatch: return "ChannelMismatch";
    case ErrorKind::RankError: return "RankError";
    case ErrorKind::ShapeError: return "ShapeError";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::FormatError: return "FormatError";
    case ErrorKind::IoError: return "IoError";
    }
    return "Error";
}

} // namespace eigengs
