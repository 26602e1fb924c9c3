// `(i, j, m, Γ_ij^(m))` frozen from a 40-digit evaluator.
#[allow(clippy::approx_constant)]
const GAMMA_COEFF_ORACLE: [(f64, f64, f64, f64); 50] = [
    (5.0, 7.0, 4.0, 0.5857316373548627376436952),
    (5.0, 4.0, 3.0, 1.194271186327057020967294),
    (1.5, 1.0, 2.5, 0.8440991158565715464657214),
    (6.0, 1.0, 2.0, 46.38757902566179078667497),
    (6.0, 6.0, 1.6666666666666667, 2.770303849820147008720172),
    (6.0, 6.0, 1.5, 4.0),
    (5.0, 4.0, 1.6666666666666667, 1.065501480700056635196744),
    (1.5, 6.0, 6.0, 0.2954089751509193378830279),
    (5.0, 5.0, 4.0, 1.002251912807209573301434),
    (1.0, 3.0, 6.0, 0.5235987755982988730771072),
    (2.5, 3.0, 3.0, 0.2954089751509193378830279),
    (4.0, 2.0, 3.5, 1.368943046050239971880264),
    (1.0, 1.0, 3.5, 1.148070807013529612253494),
    (3.0, 2.0, 3.5, 0.5636824307265694001859909),
    (3.5, 2.0, 3.0, 0.7784082609673527596441156),
    (3.5, 3.0, 3.0, 0.4431134627263790068245419),
    (1.5, 2.0, 6.0, 0.4142171787091508796302423),
    (3.0, 4.0, 2.5, 0.3171135359226359140978463),
    (6.0, 8.0, 4.0, 1.5),
    (4.0, 4.0, 3.5, 0.4704450863604088960334338),
    (3.5, 7.0, 3.0, 0.3681930477414674485602154),
    (3.5, 5.0, 2.0, 0.6646701940895685102368128),
    (3.5, 8.0, 3.0, 0.5661150988853474615593568),
    (6.0, 4.0, 5.0, 7.585677487678539915301404),
    (5.0, 4.0, 2.0, 1.0),
    (2.5, 7.0, 4.0, 0.2815586427526180716924079),
    (0.5, 2.0, 5.0, 4.220495579282857732328607),
    (5.0, 3.0, 2.5, 1.724017610836031798932137),
    (1.5, 1.0, 7.25, 0.834043998245326258544858),
    (2.0, 6.0, 3.5, 0.8200505764382354373239246),
    (3.5, 2.0, 6.0, 1.047048979514798056843113),
    (3.5, 4.0, 6.0, 0.3892041304836763798220578),
    (3.5, 5.0, 4.0, 0.2567392032538452033760964),
    (4.0, 6.0, 3.5, 0.3012430688956783239149111),
    (5.0, 6.0, 7.25, 1.17090896798952908675437),
    (4.0, 5.0, 5.0, 0.4),
    (3.5, 5.0, 7.25, 0.3066833630867073556346873),
    (3.5, 1.0, 7.25, 2.683370449764912632648929),
    (4.0, 6.0, 6.0, 0.3333333333333333333333333),
    (3.5, 8.0, 3.5, 0.3022609293660215239928191),
    (4.0, 5.0, 3.0, 0.3582813558981171062901883),
    (1.5, 1.0, 3.0, 0.8284343574183017592604847),
    (1.0, 1.0, 7.25, 1.031994217098969487090481),
    (2.5, 3.0, 2.0, 0.4431134627263790068245419),
    (3.5, 2.0, 5.0, 0.9749344788143401361679083),
    (3.0, 4.0, 2.5, 0.3171135359226359140978463),
    (3.5, 6.0, 3.5, 0.2415713311866896362362557),
    (2.5, 1.0, 1.5, 0.8491726483280211923390352),
    (5.0, 2.0, 3.5, 4.693519015029394189303761),
    (6.0, 7.0, 7.25, 3.560914799798411436860839),
];
