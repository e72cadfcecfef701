#pragma once

#include "classify.hpp"
#include "corpus.hpp"
#include "error.hpp"
#include "fitting.hpp"
#include "io.hpp"
#include "measures.hpp"
#include "pipeline.hpp"
#include "semnet.hpp"
#include "tokenize.hpp"
