// Dormand-Prince 8(5,3) after Hairer, Norsett & Wanner, "Solving Ordinary
// Differential Equations I", 2nd ed. Coefficients are the standard DOP853
// tableau including the three extra stages for the order-7 interpolant.

#include "ck/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ck::ode {

namespace {

constexpr double c2 = 0.526001519587677318785587544488e-01;
constexpr double c3 = 0.789002279381515978178381316732e-01;
constexpr double c4 = 0.118350341907227396726757197510e+00;
constexpr double c5 = 0.281649658092772603273242802490e+00;
constexpr double c6 = 0.333333333333333333333333333333e+00;
constexpr double c7 = 0.25e+00;
constexpr double c8 = 0.307692307692307692307692307692e+00;
constexpr double c9 = 0.651282051282051282051282051282e+00;
constexpr double c10 = 0.6e+00;
constexpr double c11 = 0.857142857142857142857142857142e+00;
constexpr double c14 = 0.1e+00;
constexpr double c15 = 0.2e+00;
constexpr double c16 = 0.777777777777777777777777777778e+00;

constexpr double a21 = 5.26001519587677318785587544488e-2;
constexpr double a31 = 1.97250569845378994544595329183e-2;
constexpr double a32 = 5.91751709536136983633785987549e-2;
constexpr double a41 = 2.95875854768068491816892993775e-2;
constexpr double a43 = 8.87627564304205475450678981324e-2;
constexpr double a51 = 2.41365134159266685502369798665e-1;
constexpr double a53 = -8.84549479328286085344864962717e-1;
constexpr double a54 = 9.24834003261792003115737966543e-1;
constexpr double a61 = 3.7037037037037037037037037037e-2;
constexpr double a64 = 1.70828608729473871279604482173e-1;
constexpr double a65 = 1.25467687566822425016691814123e-1;
constexpr double a71 = 3.7109375e-2;
constexpr double a74 = 1.70252211019544039314978060272e-1;
constexpr double a75 = 6.02165389804559606850219397283e-2;
constexpr double a76 = -1.7578125e-2;
constexpr double a81 = 3.70920001185047927108779319836e-2;
constexpr double a84 = 1.70383925712239993810214054705e-1;
constexpr double a85 = 1.07262030446373284651809199168e-1;
constexpr double a86 = -1.53194377486244017527936158236e-2;
constexpr double a87 = 8.27378916381402288758473766002e-3;
constexpr double a91 = 6.24110958716075717114429577812e-1;
constexpr double a94 = -3.36089262944694129406857109825e0;
constexpr double a95 = -8.68219346841726006818189891453e-1;
constexpr double a96 = 2.75920996994467083049415600797e1;
constexpr double a97 = 2.01540675504778934086186788979e1;
constexpr double a98 = -4.34898841810699588477366255144e1;
constexpr double a101 = 4.77662536438264365890433908527e-1;
constexpr double a104 = -2.48811461997166764192642586468e0;
constexpr double a105 = -5.90290826836842996371446475743e-1;
constexpr double a106 = 2.12300514481811942347288949897e1;
constexpr double a107 = 1.52792336328824235832596922938e1;
constexpr double a108 = -3.32882109689848629194453265587e1;
constexpr double a109 = -2.03312017085086261358222928593e-2;
constexpr double a111 = -9.3714243008598732571704021658e-1;
constexpr double a114 = 5.18637242884406370830023853209e0;
constexpr double a115 = 1.09143734899672957818500254654e0;
constexpr double a116 = -8.14978701074692612513997267357e0;
constexpr double a117 = -1.85200656599969598641566180701e1;
constexpr double a118 = 2.27394870993505042818970056734e1;
constexpr double a119 = 2.49360555267965238987089396762e0;
constexpr double a1110 = -3.0467644718982195003823669022e0;
constexpr double a121 = 2.27331014751653820792359768449e0;
constexpr double a124 = -1.05344954667372501984066689879e1;
constexpr double a125 = -2.00087205822486249909675718444e0;
constexpr double a126 = -1.79589318631187989172765950534e1;
constexpr double a127 = 2.79488845294199600508499808837e1;
constexpr double a128 = -2.85899827713502369474065508674e0;
constexpr double a129 = -8.87285693353062954433549289258e0;
constexpr double a1210 = 1.23605671757943030647266201528e1;
constexpr double a1211 = 6.43392746015763530355970484046e-1;

constexpr double b1 = 5.42937341165687622380535766363e-2;
constexpr double b6 = 4.45031289275240888144113950566e0;
constexpr double b7 = 1.89151789931450038304281599044e0;
constexpr double b8 = -5.8012039600105847814672114227e0;
constexpr double b9 = 3.1116436695781989440891606237e-1;
constexpr double b10 = -1.52160949662516078556178806805e-1;
constexpr double b11 = 2.01365400804030348374776537501e-1;
constexpr double b12 = 4.47106157277725905176885569043e-2;

// order-3 error weights (bhh in Hairer's code)
constexpr double bhh1 = 0.244094488188976377952755905512e+00;
constexpr double bhh2 = 0.733846688281611857341361741547e+00;
constexpr double bhh3 = 0.220588235294117647058823529412e-01;

// order-5 error weights
constexpr double er1 = 0.1312004499419488073250102996e-01;
constexpr double er6 = -0.1225156446376204440720569753e+01;
constexpr double er7 = -0.4957589496572501915214079952e+00;
constexpr double er8 = 0.1664377182454986536961530415e+01;
constexpr double er9 = -0.3503288487499736816886487290e+00;
constexpr double er10 = 0.3341791187130174790297318841e+00;
constexpr double er11 = 0.8192320648511571246570742613e-01;
constexpr double er12 = -0.2235530786388629525884427845e-01;

// dense-output extra stages
constexpr double a141 = 5.61675022830479523392909219681e-2;
constexpr double a147 = 2.53500210216624811088794765333e-1;
constexpr double a148 = -2.46239037470802489917441475441e-1;
constexpr double a149 = -1.24191423263816360469010140626e-1;
constexpr double a1410 = 1.5329179827876569731206322685e-1;
constexpr double a1411 = 8.20105229563468988491666602057e-3;
constexpr double a1412 = 7.56789766054569976138603589584e-3;
constexpr double a1413 = -8.298e-3;
constexpr double a151 = 3.18346481635021405060768473261e-2;
constexpr double a156 = 2.83009096723667755288322961402e-2;
constexpr double a157 = 5.35419883074385676223797384372e-2;
constexpr double a158 = -5.49237485713909884646569340306e-2;
constexpr double a1511 = -1.08347328697249322858509316994e-4;
constexpr double a1512 = 3.82571090835658412954920192323e-4;
constexpr double a1513 = -3.40465008687404560802977114492e-4;
constexpr double a1514 = 1.41312443674632500278074618366e-1;
constexpr double a161 = -4.28896301583791923408573538692e-1;
constexpr double a166 = -4.69762141536116384314449447206e0;
constexpr double a167 = 7.68342119606259904184240953878e0;
constexpr double a168 = 4.06898981839711007970213554331e0;
constexpr double a169 = 3.56727187455281109270669543021e-1;
constexpr double a1613 = -1.39902416515901462129418009734e-3;
constexpr double a1614 = 2.9475147891527723389556272149e0;
constexpr double a1615 = -9.15095847217987001081870187138e0;

constexpr double d41 = -0.84289382761090128651353491142e+01;
constexpr double d46 = 0.56671495351937776962531783590e+00;
constexpr double d47 = -0.30689499459498916912797304727e+01;
constexpr double d48 = 0.23846676565120698287728149680e+01;
constexpr double d49 = 0.21170345824450282767155149946e+01;
constexpr double d410 = -0.87139158377797299206789907490e+00;
constexpr double d411 = 0.22404374302607882758541771650e+01;
constexpr double d412 = 0.63157877876946881815570249290e+00;
constexpr double d413 = -0.88990336451333310820698117400e-01;
constexpr double d414 = 0.18148505520854727256656404962e+02;
constexpr double d415 = -0.91946323924783554000451984436e+01;
constexpr double d416 = -0.44360363875948939664310572000e+01;
constexpr double d51 = 0.10427508642579134603413151009e+02;
constexpr double d56 = 0.24228349177525818288430175319e+03;
constexpr double d57 = 0.16520045171727028198505394887e+03;
constexpr double d58 = -0.37454675472269020279518312152e+03;
constexpr double d59 = -0.22113666853125306036270938578e+02;
constexpr double d510 = 0.77334326684722638389603898808e+01;
constexpr double d511 = -0.30674084731089398182061213626e+02;
constexpr double d512 = -0.93321305264302278729567221706e+01;
constexpr double d513 = 0.15697238121770843886131091075e+02;
constexpr double d514 = -0.31139403219565177677282850411e+02;
constexpr double d515 = -0.93529243588444783865713862664e+01;
constexpr double d516 = 0.35816841486394083752465898540e+02;
constexpr double d61 = 0.19985053242002433820987653617e+02;
constexpr double d66 = -0.38703730874935176555105901742e+03;
constexpr double d67 = -0.18917813819516756882830838328e+03;
constexpr double d68 = 0.52780815920542364900561016686e+03;
constexpr double d69 = -0.11573902539959630126141871134e+02;
constexpr double d610 = 0.68812326946963000169666922661e+01;
constexpr double d611 = -0.10006050966910838403183860980e+01;
constexpr double d612 = 0.77771377980534432092869265740e+00;
constexpr double d613 = -0.27782057523535084065932004339e+01;
constexpr double d614 = -0.60196695231264120758267380846e+02;
constexpr double d615 = 0.84320405506677161018159903784e+02;
constexpr double d616 = 0.11992291136182789328035130030e+02;
constexpr double d71 = -0.25693933462703749003312586129e+02;
constexpr double d76 = -0.15418974869023643374053993627e+03;
constexpr double d77 = -0.23152937917604549567536039109e+03;
constexpr double d78 = 0.35763911791061412378285349910e+03;
constexpr double d79 = 0.93405324183624310003907691704e+02;
constexpr double d710 = -0.37458323136451633156875139351e+02;
constexpr double d711 = 0.10409964950896230045147246184e+03;
constexpr double d712 = 0.29840293426660503123344363579e+02;
constexpr double d713 = -0.43533456590011143754432175058e+02;
constexpr double d714 = 0.96324553959188282948394950600e+02;
constexpr double d715 = -0.39177261675615439165231486172e+02;
constexpr double d716 = -0.14972683625798562581422125276e+03;

constexpr double kSafe = 0.9;
constexpr double kMinScale = 1.0 / 3.0;
constexpr double kMaxScale = 6.0;
constexpr double kBeta = 0.04; // PI controller memory
constexpr double kExpo = 1.0 / 8.0 - kBeta * 0.2;

struct Workspace {
    std::size_t n;
    std::vector<double> y, ynew, f0, fnew, work;
    std::vector<double> k6, k7, k8, k9, k10, k11, k12, ksum;

    explicit Workspace(std::size_t n_)
        : n(n_), y(n_), ynew(n_), f0(n_), fnew(n_), work(n_), k6(n_), k7(n_), k8(n_),
          k9(n_), k10(n_), k11(n_), k12(n_), ksum(n_) {}
};

// The 12-stage core. On return: ynew = y + h*ksum and the stage slopes needed
// for error estimation and dense output are retained.
void core_step(const Rhs& rhs, double t, double h, Workspace& w, long& n_rhs) {
    const std::size_t n = w.n;
    std::vector<double>& yw = w.work;
    std::vector<double> k2(n), k3(n), k4(n), k5(n);
    const std::vector<double>& y = w.y;
    const std::vector<double>& k1 = w.f0;

    for (std::size_t i = 0; i < n; ++i) yw[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, yw, k2);
    for (std::size_t i = 0; i < n; ++i) yw[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, yw, k3);
    for (std::size_t i = 0; i < n; ++i) yw[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
    rhs(t + c4 * h, yw, k4);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, yw, k5);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
    rhs(t + c6 * h, yw, w.k6);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * w.k6[i]);
    rhs(t + c7 * h, yw, w.k7);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * w.k6[i] +
                            a87 * w.k7[i]);
    rhs(t + c8 * h, yw, w.k8);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * w.k6[i] +
                            a97 * w.k7[i] + a98 * w.k8[i]);
    rhs(t + c9 * h, yw, w.k9);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * w.k6[i] +
                            a107 * w.k7[i] + a108 * w.k8[i] + a109 * w.k9[i]);
    rhs(t + c10 * h, yw, w.k10);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * w.k6[i] +
                            a117 * w.k7[i] + a118 * w.k8[i] + a119 * w.k9[i] +
                            a1110 * w.k10[i]);
    rhs(t + c11 * h, yw, w.k11);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * w.k6[i] +
                            a127 * w.k7[i] + a128 * w.k8[i] + a129 * w.k9[i] +
                            a1210 * w.k10[i] + a1211 * w.k11[i]);
    rhs(t + h, yw, w.k12);
    n_rhs += 11;

    for (std::size_t i = 0; i < n; ++i) {
        w.ksum[i] = b1 * k1[i] + b6 * w.k6[i] + b7 * w.k7[i] + b8 * w.k8[i] +
                    b9 * w.k9[i] + b10 * w.k10[i] + b11 * w.k11[i] + b12 * w.k12[i];
        w.ynew[i] = y[i] + h * w.ksum[i];
    }
}

double error_norm(const Workspace& w, double h, double atol, double rtol) {
    const std::size_t n = w.n;
    double err3 = 0.0, err5 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::max(std::abs(w.y[i]), std::abs(w.ynew[i]));
        double e3 = w.ksum[i] - bhh1 * w.f0[i] - bhh2 * w.k9[i] - bhh3 * w.k12[i];
        double e5 = er1 * w.f0[i] + er6 * w.k6[i] + er7 * w.k7[i] + er8 * w.k8[i] +
                    er9 * w.k9[i] + er10 * w.k10[i] + er11 * w.k11[i] + er12 * w.k12[i];
        err3 += (e3 / sc) * (e3 / sc);
        err5 += (e5 / sc) * (e5 / sc);
    }
    double deno = err5 + 0.01 * err3;
    if (deno <= 0.0) deno = 1.0;
    return std::abs(h) * err5 * std::sqrt(1.0 / (static_cast<double>(n) * deno));
}

// Three extra stages, then the 8 nested interpolation coefficients per
// component. fnew must hold f(t+h, ynew).
void prepare_dense(const Rhs& rhs, double t, double h, Workspace& w, DenseStep& ds,
                   long& n_rhs) {
    const std::size_t n = w.n;
    ds.cont.assign(8 * n, 0.0);
    std::vector<double>& yw = w.work;
    std::vector<double> k14(n), k15(n), k16(n);

    for (std::size_t i = 0; i < n; ++i)
        yw[i] = w.y[i] + h * (a141 * w.f0[i] + a147 * w.k7[i] + a148 * w.k8[i] +
                              a149 * w.k9[i] + a1410 * w.k10[i] + a1411 * w.k11[i] +
                              a1412 * w.k12[i] + a1413 * w.fnew[i]);
    rhs(t + c14 * h, yw, k14);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = w.y[i] + h * (a151 * w.f0[i] + a156 * w.k6[i] + a157 * w.k7[i] +
                              a158 * w.k8[i] + a1511 * w.k11[i] + a1512 * w.k12[i] +
                              a1513 * w.fnew[i] + a1514 * k14[i]);
    rhs(t + c15 * h, yw, k15);
    for (std::size_t i = 0; i < n; ++i)
        yw[i] = w.y[i] + h * (a161 * w.f0[i] + a166 * w.k6[i] + a167 * w.k7[i] +
                              a168 * w.k8[i] + a169 * w.k9[i] + a1613 * w.fnew[i] +
                              a1614 * k14[i] + a1615 * k15[i]);
    rhs(t + c16 * h, yw, k16);
    n_rhs += 3;

    for (std::size_t i = 0; i < n; ++i) {
        double ydiff = w.ynew[i] - w.y[i];
        double bspl = h * w.f0[i] - ydiff;
        ds.cont[0 * n + i] = w.y[i];
        ds.cont[1 * n + i] = ydiff;
        ds.cont[2 * n + i] = bspl;
        ds.cont[3 * n + i] = ydiff - h * w.fnew[i] - bspl;
        ds.cont[4 * n + i] =
            h * (d41 * w.f0[i] + d46 * w.k6[i] + d47 * w.k7[i] + d48 * w.k8[i] +
                 d49 * w.k9[i] + d410 * w.k10[i] + d411 * w.k11[i] + d412 * w.k12[i] +
                 d413 * w.fnew[i] + d414 * k14[i] + d415 * k15[i] + d416 * k16[i]);
        ds.cont[5 * n + i] =
            h * (d51 * w.f0[i] + d56 * w.k6[i] + d57 * w.k7[i] + d58 * w.k8[i] +
                 d59 * w.k9[i] + d510 * w.k10[i] + d511 * w.k11[i] + d512 * w.k12[i] +
                 d513 * w.fnew[i] + d514 * k14[i] + d515 * k15[i] + d516 * k16[i]);
        ds.cont[6 * n + i] =
            h * (d61 * w.f0[i] + d66 * w.k6[i] + d67 * w.k7[i] + d68 * w.k8[i] +
                 d69 * w.k9[i] + d610 * w.k10[i] + d611 * w.k11[i] + d612 * w.k12[i] +
                 d613 * w.fnew[i] + d614 * k14[i] + d615 * k15[i] + d616 * k16[i]);
        ds.cont[7 * n + i] =
            h * (d71 * w.f0[i] + d76 * w.k6[i] + d77 * w.k7[i] + d78 * w.k8[i] +
                 d79 * w.k9[i] + d710 * w.k10[i] + d711 * w.k11[i] + d712 * w.k12[i] +
                 d713 * w.fnew[i] + d714 * k14[i] + d715 * k15[i] + d716 * k16[i]);
    }
    ds.t0 = t;
    ds.h = h;
}

double initial_step(const Rhs& rhs, double t0, const std::vector<double>& y0,
                    const std::vector<double>& f0, double atol, double rtol,
                    double hmax, long& n_rhs) {
    const std::size_t n = y0.size();
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::abs(y0[i]);
        dnf += (f0[i] / sc) * (f0[i] / sc);
        dny += (y0[i] / sc) * (y0[i] / sc);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, hmax);

    std::vector<double> y1(n), f1(n);
    for (std::size_t i = 0; i < n; ++i) y1[i] = y0[i] + h * f0[i];
    rhs(t0 + h, y1, f1);
    ++n_rhs;
    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double sc = atol + rtol * std::abs(y0[i]);
        der2 += ((f1[i] - f0[i]) / sc) * ((f1[i] - f0[i]) / sc);
    }
    der2 = std::sqrt(der2) / h;
    double der12 = std::max(der2, std::sqrt(dnf));
    double h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                 : std::pow(0.01 / der12, 1.0 / 8.0);
    return std::min({100.0 * h, h1, hmax});
}

} // namespace

void DenseStep::eval(double t, std::span<double> y) const {
    const std::size_t n = y.size();
    double s = (t - t0) / h;
    double s1 = 1.0 - s;
    for (std::size_t i = 0; i < n; ++i) {
        const double* c = cont.data();
        double v = c[6 * n + i] + s * c[7 * n + i];
        v = c[5 * n + i] + s1 * v;
        v = c[4 * n + i] + s * v;
        v = c[3 * n + i] + s1 * v;
        v = c[2 * n + i] + s * v;
        v = c[1 * n + i] + s1 * v;
        y[i] = c[0 * n + i] + s * v;
    }
}

void DenseOutput::eval(double t, std::span<double> y) const {
    // binary search for the step containing t; clamp to the covered span
    std::size_t lo = 0, hi = steps.size() - 1;
    while (lo < hi) {
        std::size_t mid = (lo + hi + 1) / 2;
        if (steps[mid].t0 <= t)
            lo = mid;
        else
            hi = mid - 1;
    }
    steps[lo].eval(t, y);
}

std::vector<double> DenseOutput::eval(double t) const {
    std::vector<double> y(steps.front().cont.size() / 8);
    eval(t, y);
    return y;
}

Result integrate_dop853(const Rhs& rhs, double t0, std::span<const double> y0,
                        double t_end, const Options& opt, std::span<const Event> events,
                        bool keep_dense, const StepObserver& observer) {
    const std::size_t n = y0.size();
    Result res;
    res.y.assign(y0.begin(), y0.end());
    res.t = t0;

    Workspace w(n);
    w.y.assign(y0.begin(), y0.end());
    rhs(t0, w.y, w.f0);
    res.n_rhs = 1;

    if (observer) observer(t0, w.y);

    const double span = t_end - t0;
    const double hmax = opt.max_step > 0.0 ? opt.max_step : std::abs(span);
    const bool need_dense = keep_dense || !events.empty();
    double h = opt.initial_step > 0.0
                   ? opt.initial_step
                   : initial_step(rhs, t0, w.y, w.f0, opt.atol, opt.rtol, hmax, res.n_rhs);

    std::vector<double> g_prev(events.size());
    for (std::size_t e = 0; e < events.size(); ++e) g_prev[e] = events[e].value(t0, w.y);

    double t = t0;
    double facold = 1e-4;
    bool last_rejected = false;
    const double eps = std::numeric_limits<double>::epsilon();

    while (t < t_end) {
        if (res.n_steps >= opt.max_steps) {
            res.stop = Stop::MaxSteps;
            res.t = t;
            res.y = w.y;
            return res;
        }
        if (h < 16.0 * eps * std::max(std::abs(t), 1.0)) {
            res.stop = Stop::StepUnderflow;
            res.t = t;
            res.y = w.y;
            return res;
        }
        bool last_step = false;
        if (t + h >= t_end) {
            h = t_end - t;
            last_step = true;
        }

        core_step(rhs, t, h, w, res.n_rhs);
        ++res.n_steps;
        double err = error_norm(w, h, opt.atol, opt.rtol);

        if (err > 1.0 || !std::isfinite(err)) {
            double fac = std::isfinite(err)
                             ? std::max(kSafe * std::pow(err, -kExpo), kMinScale)
                             : kMinScale;
            h *= fac;
            last_rejected = true;
            continue;
        }

        // accepted
        rhs(t + h, w.ynew, w.fnew);
        ++res.n_rhs;

        DenseStep ds;
        if (need_dense) prepare_dense(rhs, t, h, w, ds, res.n_rhs);

        // event location inside [t, t+h]
        bool terminal_hit = false;
        double t_stop = t + h;
        for (std::size_t e = 0; e < events.size(); ++e) {
            double g1 = events[e].value(t + h, w.ynew);
            bool crossed = false;
            if (g_prev[e] != 0.0) {
                if (events[e].direction >= 0 && g_prev[e] < 0.0 && g1 >= 0.0) crossed = true;
                if (events[e].direction <= 0 && g_prev[e] > 0.0 && g1 <= 0.0) crossed = true;
            }
            if (crossed) {
                double glo = g_prev[e];
                double slo = 0.0, shi = 1.0;
                std::vector<double> ymid(n);
                for (int it = 0; it < 90 && (shi - slo) > 4.0 * eps; ++it) {
                    double sm = 0.5 * (slo + shi);
                    ds.eval(t + sm * h, ymid);
                    double gm = events[e].value(t + sm * h, ymid);
                    if (gm == 0.0 || (gm > 0.0) == (glo > 0.0)) {
                        slo = sm;
                        glo = gm;
                        if (gm == 0.0) break;
                    } else {
                        shi = sm;
                    }
                }
                double t_hit = t + shi * h;
                ds.eval(t_hit, ymid);
                EventHit hit{static_cast<int>(e), t_hit, ymid};
                if (events[e].terminal) {
                    if (!terminal_hit || t_hit < t_stop) {
                        terminal_hit = true;
                        t_stop = t_hit;
                        res.event_index = static_cast<int>(e);
                        res.y = ymid;
                    }
                }
                res.hits.push_back(std::move(hit));
            }
            g_prev[e] = g1;
        }

        if (terminal_hit) {
            if (keep_dense) res.dense.steps.push_back(ds);
            res.stop = Stop::Event;
            res.t = t_stop;
            if (observer) observer(res.t, res.y);
            return res;
        }

        if (keep_dense) res.dense.steps.push_back(std::move(ds));

        t += h;
        w.y.swap(w.ynew);
        w.f0.swap(w.fnew);
        if (observer) observer(t, w.y);

        if (last_step) break;

        double fac11 = std::pow(err, kExpo);
        double fac = fac11 / std::pow(facold, kBeta);
        fac = std::clamp(fac, kSafe / kMaxScale, kSafe / kMinScale);
        double hnew = h / (fac / kSafe);
        if (last_rejected) hnew = std::min(hnew, h);
        h = std::min(hnew, hmax);
        facold = std::max(err, 1e-4);
        last_rejected = false;
    }

    res.stop = Stop::ReachedEnd;
    res.t = t_end;
    res.y = w.y;
    return res;
}

} // namespace ck::ode
