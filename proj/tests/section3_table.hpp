// Reference data for the alternating-rule-pair scan at w = 10.
#pragma once

#include <array>

namespace refdata {

struct PairCell {
  int rule1;
  int rule2;
  long period;
};

// The 62 readable cells of the reference rule-pair period table.
inline constexpr std::array<PairCell, 62> kReferencePairTable{{
    {39, 54, 1022},   {39, 99, 1022},   {39, 156, 1022},  {39, 201, 1022},
    {52, 97, 1274},   {52, 99, 1588},   {52, 156, 1588},  {52, 188, 1272},
    {54, 54, 889},    {54, 97, 1392},   {54, 99, 1778},   {54, 114, 1022},
    {54, 141, 1022},  {54, 148, 1588},  {54, 156, 1778},  {54, 188, 1392},
    {54, 201, 889},   {97, 52, 1274},   {97, 54, 1392},   {97, 201, 1392},
    {97, 233, 1284},  {99, 39, 1022},   {99, 52, 1588},   {99, 54, 1778},
    {99, 201, 1778},  {99, 216, 1022},  {114, 54, 1022},  {114, 201, 1022},
    {141, 54, 1022},  {141, 201, 1022}, {148, 54, 1588},  {148, 193, 1274},
    {148, 201, 1588}, {156, 39, 1022},  {156, 52, 1588},  {156, 54, 1778},
    {156, 201, 1778}, {156, 216, 1022}, {188, 52, 1272},  {188, 54, 1392},
    {188, 201, 1392}, {188, 233, 1272}, {193, 148, 1274}, {193, 227, 1284},
    {201, 54, 889},   {201, 97, 1392},  {201, 99, 1778},  {201, 114, 1022},
    {201, 141, 1022}, {201, 148, 1588}, {201, 156, 1778}, {201, 188, 1392},
    {201, 201, 889},  {216, 54, 1022},  {216, 99, 1022},  {216, 156, 1022},
    {216, 201, 1022}, {227, 54, 1496},  {227, 193, 1284}, {227, 201, 1496},
    {233, 97, 1284},  {233, 188, 1272},
}};

// Complex pairs the full scan finds beyond the reference table. Each period
// was confirmed against a 10,000-step direct-comparison oracle.
inline constexpr std::array<PairCell, 12> kExtraComplexPairs{{
    {54, 39, 1022},  {54, 52, 1096},  {54, 216, 1022}, {54, 233, 1098},
    {99, 227, 1098}, {156, 227, 1098}, {201, 39, 1022}, {201, 52, 1096},
    {201, 216, 1022}, {201, 233, 1098}, {227, 99, 1098}, {227, 156, 1098},
}};

} // namespace refdata
