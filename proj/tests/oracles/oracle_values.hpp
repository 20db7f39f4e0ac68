// Generated by tests/oracles/generate_oracles.py. Do not edit by hand.
#pragma once
#include <complex>
namespace oracle {
using C = std::complex<double>;
inline const C sigma_w005{8.2378552058307384e-2, 5.8512505123602485e-1};  // E_f 0.1, tau 1e-13, omega 0.05
inline const C sigma_w03{2.523268284986037e-1, -2.2022755831745034e-2};  // E_f 0.1, tau 1e-13, omega 0.3
inline const C sigma_w1{2.5020950629637243e-1, -4.3627848046616067e-4};  // E_f 0.1, tau 1e-13, omega 1.0
inline const C rp_evanescent{1.47620047374289e-1, 3.1375785761779308e-1};  // omega 0.3, k 0.05
inline const C rp_substrate{1.2072040649479802e-1, -5.8802930092762403e-4};  // omega 0.3, k 0.001, eps2 2.25
inline const C rp_bare_interface{3.1384904786983733e-1, 0.0};  // no sheet, eps2 4
inline const C ksp_vacuum{4.776545856561717e-2, 4.3410870036639273e-3};  // omega 0.1
inline const C ksp_substrate{1.1702244125096074e-1, 1.0635929653335448e-2};  // omega 0.1, eps2 3.9
inline const double i0e_0p5 = 6.4503527044915007e-1;
inline const double i0e_3 = 2.430003541618254e-1;
inline const double i0e_40 = 6.327827987523533e-2;
inline const double i0e_700 = 1.5081295651531358e-2;
inline const double pair_kernel_1e6_1e_3 = 7.6151751101295152e-2;
inline const double pair_kernel_4e4_0p01 = 1.1124370882429629e-1;
inline const C mean_h2_w01{-2.3389514966734796e-9, 2.1774044917966099e-10};  // defaults, omega 0.1
inline const C mean_h2_w03_L300{1.070685869492297e-8, 9.1545521034832857e-8};  // omega 0.3, L 300
inline const C mean_h1_w01{8.9390382818235005e-3, 1.0787643465672764e-2};  // defaults, omega 0.1
inline const C root_free_a{-3.0e-1, 1.0e-3};
inline const C root_free_m{0.0, 0.0};
inline const C root_free_x{-3.3332962967078144, -1.1110987655692715e-2};
inline const C root_gapped_a{-3.0e-1, 1.0e-3};
inline const C root_gapped_m{1.0e-2, 2.0e-4};
inline const C root_gapped_x{-3.8192789868077795, -3.0125409026036215e-2};
inline const C root_band_a{-1.0e-1, 5.0e-4};
inline const C root_band_m{1.0e-2, 0.0};
inline const C root_band_x{-4.9855663234569058, -8.6353021500995305};
inline const C root_positive_a{2.5e-1, -2.0e-3};
inline const C root_positive_m{4.0e-3, 1.0e-4};
inline const C root_positive_x{4.2944918507105095, 4.8380722410197927e-2};
}  // namespace oracle
