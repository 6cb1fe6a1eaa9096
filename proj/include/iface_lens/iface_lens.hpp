#pragma once

// Umbrella header.

#include "iface_lens/cli.hpp"
#include "iface_lens/corpus_io.hpp"
#include "iface_lens/diagnostic.hpp"
#include "iface_lens/java_lexer.hpp"
#include "iface_lens/java_parser.hpp"
#include "iface_lens/metrics.hpp"
#include "iface_lens/pipeline.hpp"
#include "iface_lens/report.hpp"
#include "iface_lens/type_graph.hpp"
