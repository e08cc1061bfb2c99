#pragma once

#include <cstddef>
#include <span>

namespace wavedet::detail {

// Daubechies decomposition low-pass filters, orders 1..10, normalized so
// that sum(h) = sqrt(2) and sum(h^2) = 1. Values are spectral-factorization
// results rounded to 17 significant digits; the test suite re-checks every
// invariant (unit energy, quadrature mirror, double-shift orthogonality)
// rather than trusting these constants.
inline constexpr double kDb1[] = {
    0.70710678118654752, 0.70710678118654752};
inline constexpr double kDb2[] = {
    -0.12940952255126038, 0.22414386804201338,
    0.83651630373780791,  0.48296291314453414};
inline constexpr double kDb3[] = {
    0.035226291885709537, -0.085441273882026662, -0.13501102001025459,
    0.45987750211849157,  0.80689150931109258,   0.33267055295008262};
inline constexpr double kDb4[] = {
    -0.010597401785069032, 0.032883011666885200, 0.030841381835560764,
    -0.18703481171909308,  -0.027983769416859854, 0.63088076792985891,
    0.71484657055291565,   0.23037781330889650};
inline constexpr double kDb5[] = {
    0.0033357252854737713, -0.012580751999081999, -0.0062414902127982743,
    0.077571493840045714,  -0.032244869584638375, -0.24229488706638203,
    0.13842814590132073,   0.72430852843777293,   0.60382926979718967,
    0.16010239797419291};
inline constexpr double kDb6[] = {
    -0.0010773010853084796, 0.0047772575109455106, 0.00055384220116149614,
    -0.031582039317486030,  0.027522865530305729,  0.097501605587323049,
    -0.12976686756726194,   -0.22626469396543982,  0.31525035170919763,
    0.75113390802109535,    0.49462389039845309,   0.11154074335010946};
inline constexpr double kDb7[] = {
    0.00035371379997452025, -0.0018016407040474909, 0.00042957797292136652,
    0.012550998556099841,   -0.016574541630666881,  -0.038029936935014414,
    0.080612609151083072,   0.071309219266830265,   -0.22403618499387498,
    -0.14390600392856498,   0.46978228740519312,    0.72913209084623512,
    0.39653931948191731,    0.077852054085009179};
inline constexpr double kDb8[] = {
    -0.00011747678412476953, 0.00067544940645056937, -0.00039174037337694705,
    -0.0048703529934515743,  0.0087460940474057767,  0.013981027917398282,
    -0.044088253930794752,   -0.017369301001807546,  0.12874742662047846,
    0.00047248457391328277,  -0.28401554296154693,   -0.015829105256349306,
    0.58535468365420671,     0.67563073629728981,    0.31287159091429997,
    0.054415842243104010};
inline constexpr double kDb9[] = {
    3.9347320316271599e-05, -0.00025196318894271014, 0.00023038576352319597,
    0.0018476468830562265,  -0.0042815036824634298,  -0.0047232047577513973,
    0.022361662123679097,   0.00025094711483145196,  -0.067632829061329974,
    0.030725681479333379,   0.14854074933810638,     -0.096840783222976461,
    -0.29327378327917491,   0.13319738582500758,     0.65728807805130054,
    0.60482312369011111,    0.24383467461259035,     0.038077947363878347};
inline constexpr double kDb10[] = {
    -1.3264202894521245e-05, 9.3588670320069591e-05, -0.00011646685512928545,
    -0.00068585669495971163, 0.0019924052951850561,  0.0013953517470529012,
    -0.010733175483330575,   0.0036065535669561697,  0.033212674059341002,
    -0.029457536821875813,   -0.071394147166397087,  0.093057364603572351,
    0.12736934033579326,     -0.19594627437737704,   -0.24984642432731538,
    0.28117234366057746,     0.68845903945360357,    0.52720118893172559,
    0.18817680007769149,     0.026670057900555554};

inline constexpr std::span<const double> kDaubechiesLowPass[] = {
    kDb1, kDb2, kDb3, kDb4, kDb5, kDb6, kDb7, kDb8, kDb9, kDb10};

inline constexpr int kMaxDaubechiesOrder = 10;

}  // namespace wavedet::detail
