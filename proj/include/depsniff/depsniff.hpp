#pragma once

#include "depsniff/builtins.hpp"
#include "depsniff/classify.hpp"
#include "depsniff/errors.hpp"
#include "depsniff/git.hpp"
#include "depsniff/grid.hpp"
#include "depsniff/history.hpp"
#include "depsniff/imports.hpp"
#include "depsniff/manifest.hpp"
#include "depsniff/process.hpp"
#include "depsniff/range.hpp"
#include "depsniff/report.hpp"
#include "depsniff/scanner.hpp"
#include "depsniff/smells.hpp"
#include "depsniff/stats.hpp"
#include "depsniff/version.hpp"
