#ifndef ABRIDGER_HPP
#define ABRIDGER_HPP

#include "abridger/abridgers.hpp"
#include "abridger/aligner.hpp"
#include "abridger/assessment.hpp"
#include "abridger/chapters.hpp"
#include "abridger/error.hpp"
#include "abridger/evaluation.hpp"
#include "abridger/io.hpp"
#include "abridger/lexstats.hpp"
#include "abridger/passage_map.hpp"
#include "abridger/pipeline.hpp"
#include "abridger/row_store.hpp"
#include "abridger/similarity.hpp"
#include "abridger/stages.hpp"
#include "abridger/text.hpp"
#include "abridger/unicode.hpp"

#endif  // ABRIDGER_HPP
