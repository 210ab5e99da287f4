// Generated by tools/gen_problem_fields.py. Do not edit.
#include "amfem/problems.hpp"

#include <cmath>

namespace amfem::detail {

namespace {

// Polar angle measured from the positive x-axis, in [0, 2*pi).
double reentrant_angle(double x, double y)
{
  double t = std::atan2(y, x);
  if (t < 0.0) t += 2.0 * M_PI;
  return t;
}

}  // namespace

FieldSample smooth_hodge_fields(double x, double y)
{
  const double x0 = 2*pow(M_PI, 2);
  const double x1 = M_PI*y;
  const double x2 = sin(x1);
  const double x3 = M_PI*x;
  const double x4 = sin(x3);
  const double x5 = x2*x4;
  const double x6 = cos(x3);
  const double x7 = 2*x6;
  const double x8 = pow(M_PI, 3);
  const double x9 = x2*x8;
  const double x10 = cos(x1);
  const double x11 = 2*x10;
  const double x12 = x4*x8;
  const double x13 = pow(x4, 2);
  const double x14 = pow(x2, 2);
  FieldSample s;
  s.sigma = x0*x5;
  s.grad_sigma[0] = x7*x9;
  s.grad_sigma[1] = x11*x12;
  s.u[0] = M_PI*x2*(x11*x13 + x6);
  s.u[1] = -M_PI*x4*(-x10 + x14*x7);
  s.rot_u = -x0*(-4*x13*x14 + x13 + x14);
  s.f[0] = 2*x9*(8*x10*x13 - x11 + x6);
  s.f[1] = 2*x12*(x10 - 8*x14*x6 + x7);
  s.div_f = -4*pow(M_PI, 4)*x5;
  return s;
}

FieldSample smooth_maxwell_fields(double x, double y)
{
  const double x0 = M_PI*x;
  const double x1 = sin(x0);
  const double x2 = pow(x1, 2);
  const double x3 = 2*M_PI;
  const double x4 = M_PI*y;
  const double x5 = sin(x4);
  const double x6 = x5*cos(x4);
  const double x7 = pow(x5, 2);
  const double x8 = x1*cos(x0);
  const double x9 = 4*pow(M_PI, 3);
  FieldSample s;
  s.sigma = 0;
  s.grad_sigma[0] = 0;
  s.grad_sigma[1] = 0;
  s.u[0] = x2*x3*x6;
  s.u[1] = -x3*x7*x8;
  s.rot_u = -2*pow(M_PI, 2)*(-4*x2*x7 + x2 + x7);
  s.f[0] = -x6*x9*(2*cos(2*x0) - 1);
  s.f[1] = x8*x9*(2*cos(2*x4) - 1);
  s.div_f = 0;
  return s;
}

FieldSample singular_lshape_fields(double x, double y)
{
  const double r = std::hypot(x, y);
  const double th = reentrant_angle(x, y);
  const double x0 = (2.0/3.0)*th;
  const double x1 = sin(x0);
  const double x2 = pow(r, 8.0/3.0);
  const double x3 = x1*x2;
  const double x4 = 36*x3;
  const double x5 = pow(x, 2);
  const double x6 = pow(y, 2);
  const double x7 = x6 - 1;
  const double x8 = pow(x7, 2);
  const double x9 = x5*x8;
  const double x10 = x5 - 1;
  const double x11 = pow(x10, 2);
  const double x12 = x11*x6;
  const double x13 = x10*x8;
  const double x14 = 9*x3;
  const double x15 = x11*x7;
  const double x16 = pow(r, 2.0/3.0);
  const double x17 = x11*x8;
  const double x18 = x1*x17;
  const double x19 = x16*x18;
  const double x20 = x*x13;
  const double x21 = cos(x0);
  const double x22 = x16*x21;
  const double x23 = x22*y;
  const double x24 = 12*x23;
  const double x25 = x13*x5;
  const double x26 = x1*x16;
  const double x27 = 48*x26;
  const double x28 = 2*x5;
  const double x29 = x17*x28;
  const double x30 = pow(r, -4.0/3.0);
  const double x31 = x1*x30;
  const double x32 = 2*x6;
  const double x33 = x17*x32;
  const double x34 = x10*x7;
  const double x35 = pow(y, 3);
  const double x36 = pow(x10, 3);
  const double x37 = x35*x36;
  const double x38 = 36*x22;
  const double x39 = 108*x3;
  const double x40 = pow(x, 3);
  const double x41 = x40*x8;
  const double x42 = x*x6;
  const double x43 = 144*x26;
  const double x44 = x*x3;
  const double x45 = x36*x7;
  const double x46 = 36*x26;
  const double x47 = 9*x22;
  const double x48 = x7*y;
  const double x49 = x36*x48;
  const double x50 = 14*x31;
  const double x51 = x*x8;
  const double x52 = x36*x51;
  const double x53 = x21*x30;
  const double x54 = 8*x53;
  const double x55 = x36*x8;
  const double x56 = x55*y;
  const double x57 = x35*x7;
  const double x58 = x36*x57;
  const double x59 = 48*x53;
  const double x60 = 252*x19;
  const double x61 = x13*x40;
  const double x62 = 432*x26;
  const double x63 = 27*x17;
  const double x64 = 60*x31;
  const double x65 = x42*x45;
  const double x66 = 12*x53;
  const double x67 = x15*x42;
  const double x68 = x25*y;
  const double x69 = 108*x22;
  const double x70 = x15*x5;
  const double x71 = x70*y;
  const double x72 = pow(r, -10.0/3.0);
  const double x73 = x1*x72;
  const double x74 = 4*x36;
  const double x75 = x73*x74;
  const double x76 = x37*x8;
  const double x77 = x21*x72;
  const double x78 = 2*x77;
  const double x79 = x18*x30;
  const double x80 = 66*x79;
  const double x81 = x51*x6;
  const double x82 = 6*x79;
  const double x83 = x53*y;
  const double x84 = 60*x17;
  const double x85 = pow(x7, 3);
  const double x86 = x40*x85;
  const double x87 = x11*x35;
  const double x88 = x5*x85;
  const double x89 = x3*y;
  const double x90 = x*x10;
  const double x91 = x85*x90;
  const double x92 = x10*x85;
  const double x93 = x92*y;
  const double x94 = x11*x85;
  const double x95 = x*x94;
  const double x96 = x10*x40;
  const double x97 = x85*x96;
  const double x98 = x11*y;
  const double x99 = x85*x98;
  const double x100 = x*x22;
  const double x101 = x15*x35;
  const double x102 = x5*x93;
  const double x103 = x13*x42;
  const double x104 = x11*x86;
  const double x105 = x73*x85;
  const double x106 = x32*x95;
  const double x107 = 4*x88*x98;
  const double x108 = x5*y;
  const double x109 = x35*x5;
  const double x110 = (9.0/10.0)*x3;
  const double x111 = (2.0/5.0)*x26;
  const double x112 = x40*x6;
  const double x113 = pow(y, 4);
  const double x114 = x11*x113;
  const double x115 = pow(x, 4);
  const double x116 = x115*x8;
  const double x117 = 20*x6;
  const double x118 = x36*x85;
  const double x119 = 16*y;
  const double x120 = 4*x17;
  const double x121 = 80*x34;
  const double x122 = (4.0/15.0)*x118;
  const double x123 = (9.0/5.0)*x22;
  const double x124 = (12.0/5.0)*x22;
  const double x125 = x5*x92;
  const double x126 = (2.0/5.0)*x36;
  const double x127 = x126*x86;
  const double x128 = (2.0/5.0)*x37;
  const double x129 = 2*x53;
  const double x130 = x118*x73;
  const double x131 = (2.0/5.0)*x130;
  const double x132 = (2.0/5.0)*x118*x77;
  const double x133 = 16*x;
  const double x134 = x*x53;
  const double x135 = (16.0/15.0)*x118;
  const double x136 = x135*x31;
  const double x137 = (27.0/5.0)*x18*x2;
  const double x138 = (36.0/5.0)*x22;
  const double x139 = (48.0/5.0)*x26;
  const double x140 = (108.0/5.0)*x3;
  const double x141 = x126*x31*x9;
  const double x142 = (144.0/5.0)*x19;
  const double x143 = x142*x5;
  const double x144 = (192.0/5.0)*x26;
  const double x145 = x140*x6;
  const double x146 = (27.0/5.0)*x3;
  const double x147 = (88.0/5.0)*x31;
  const double x148 = 96*x26;
  const double x149 = x45*x6;
  const double x150 = x5*x6;
  const double x151 = x1/pow(r, 16.0/3.0);
  const double x152 = (8.0/15.0)*x118*x151;
  const double x153 = (8.0/5.0)*x5;
  const double x154 = (24.0/5.0)*x73;
  const double x155 = (8.0/5.0)*x6;
  const double x156 = (86.0/5.0)*x31;
  const double x157 = 24*x17;
  const double x158 = (576.0/5.0)*x26*x6;
  FieldSample s;
  s.sigma = (1.0/10.0)*x34*(x*x15*x24 + x12*x4 + x13*x14 + x14*x15 + x15*x27*x6 + 8*x19 - x20*x24 + x25*x27 + x29*x31 + x31*x33 + x4*x9);
  s.grad_sigma[0] = ((1.0/15.0)*x6 - 1.0/15.0)*(x*x45*x46 + x*x60 + 324*x12*x44 + 162*x13*x44 + 81*x15*x44 - x23*x63 - x28*x56*x77 + x36*x42*x43 - x37*x38 + x39*x41 + x40*x80 - x41*x75 + x42*x82 + x47*x49 + x49*x5*x66 - x5*x83*x84 + x50*x52 - x54*x56 - x58*x59 + x61*x62 + x62*x67 + x64*x65 - x68*x69 + x69*x71 - x75*x81 - x76*x78);
  s.grad_sigma[1] = ((1.0/15.0)*x5 - 1.0/15.0)*(x100*x63 + x101*x62 + x102*x64 - x103*x69 + x104*x78 - 4*x105*x87 + x106*x77 - x107*x73 + x108*x82 + 81*x13*x89 + 162*x15*x89 + x35*x80 + x38*x86 + x39*x87 + x42*x53*x84 + x43*x88*y + x46*x93 - x47*x91 + x50*x99 + x54*x95 + x59*x97 - x6*x66*x91 + x60*y + x62*x68 + x67*x69 + 324*x89*x9);
  s.u[0] = x15*(4*x109 - x110*x51 - x111*x20 + (1.0/10.0)*x13*x23 + x28*x48);
  s.u[1] = -x13*((1.0/10.0)*x100*x15 + x110*x98 + x111*x15*y + 4*x112 + x32*x90);
  s.rot_u = -8*x114*x5 - 8*x116*x6 - x117*x25 - x117*x70 - 1.0/5.0*x118*x22 + (1.0/5.0)*x21*x30*x36*x5*x85 + (1.0/5.0)*x21*x30*x36*x6*x85 - x29 - x33;
  s.f[0] = (54.0/5.0)*x*x1*x10*x2*x85 + (144.0/5.0)*x*x1*x11*x16*x6*x8 + (84.0/5.0)*x*x1*x11*x16*x85 + (108.0/5.0)*x*x1*x11*x2*x6*x7 + (27.0/5.0)*x*x1*x11*x2*x8 + (2.0/5.0)*x*x1*x11*x30*x6*x85 + (48.0/5.0)*x*x1*x16*x36*x6*x7 + (12.0/5.0)*x*x1*x16*x36*x8 + 4*x*x1*x30*x36*x6*x8 + (16.0/15.0)*x*x1*x30*x36*x85 + (144.0/5.0)*x1*x10*x16*x40*x85 + (22.0/5.0)*x1*x11*x30*x40*x85 + (36.0/5.0)*x1*x2*x40*x85 - 8*x101 - x107*x53 - x108*x132 - 72*x109*x11 - x109*x121 + (36.0/5.0)*x11*x16*x21*x5*x8*y - 32*x115*x57 - x116*x119 - x120*y - x122*x83 - x123*x99 - x124*x58 - 36.0/5.0*x125*x23 - x127*x73 - x128*x77*x85 - x129*x76 - x131*x42 + 2*x21*x30*x36*x5*x8*y - 3.0/5.0*x23*x55 - 40*x68 - 48*x71;
  s.f[1] = x*x120 + x102*x139 + 48*x103 + x104*x129 - x105*x128 - x106*x53 + x107*x31 - x108*x131 + x112*x121 + 72*x112*x8 + 32*x113*x96 + x114*x133 + x122*x134 + x123*x52 + x124*x97 + x127*x77 + x132*x42 + x136*y + x137*y - x138*x17*x42 + x138*x65 + x140*x68 + x141*y + x143*y + (3.0/5.0)*x22*x95 + (84.0/5.0)*x26*x56 + (144.0/5.0)*x26*x58 + (12.0/5.0)*x26*x99 + (36.0/5.0)*x3*x37 + (54.0/5.0)*x3*x49 + (22.0/5.0)*x31*x76 + x53*x74*x81 + 8*x61 + 40*x67;
  s.div_f = -288.0/5.0*x100*x101 + (96.0/5.0)*x100*x37 + (144.0/5.0)*x100*x49 + 2*x113*x144*x36 + 2*x113*x147*x45 + 2*x113*x152 - 2*x113*x154*x55 + 2*x115*x144*x85 + 2*x115*x147*x92 + 2*x115*x152 - 2*x115*x154*x94 - 2*x119*x53*x97 - 2*x12*x154*x88 + (4.0/5.0)*x12*x31*x85 + 2*x125*x148 + 2*x125*x155*x31 - 2*x130*x153 - 2*x130*x155 + 2*x133*x53*x58 - 2*x134*x157*x35 - 24*x134*x99 + 2*x135*x150*x151 + 2*x136 + 2*x137 + 2*x139*x55 + 2*x139*x94 + 2*x140*x25 + 2*x140*x88 + 2*x141 + 2*x142*x6 + 2*x143 + 2*x145*x15 + 2*x145*x36 + 2*x146*x45 + 2*x146*x92 + 2*x148*x149 + 2*x149*x153*x31 + (864.0/5.0)*x150*x3*x34 + 96*x150*x79 - 2*x154*x36*x6*x9 + 2*x156*x5*x94 + 2*x156*x55*x6 + 2*x157*x40*x83 + 2*x158*x25 + 2*x158*x70 + (288.0/5.0)*x23*x61 - 96.0/5.0*x23*x86 - 144.0/5.0*x23*x91 + 24*x52*x83;
  return s;
}

}  // namespace amfem::detail
