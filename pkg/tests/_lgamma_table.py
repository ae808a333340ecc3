"""Reference values of ln Gamma at half-integers, computed once at 50
significant digits with an arbitrary-precision library and frozen here
(rounded to 25 digits, far below double precision)."""


_LOG_GAMMA_50_DIGIT_TABLE = (
    (0.5, 0.5723649429247000870717137),
    (1.0, 0.0),
    (1.5, -0.1207822376352452223455184),
    (2.0, 0.0),
    (2.5, 0.2846828704729191596324947),
    (3.0, 0.6931471805599453094172321),
    (3.5, 1.200973602347074224816022),
    (4.0, 1.791759469228055000812477),
    (4.5, 2.453736570842442220504143),
    (5.0, 3.178053830347945619646942),
    (5.5, 3.957813967618716293877401),
    (6.0, 4.787491742782045994247701),
    (6.5, 5.662562059857141528522112),
    (7.0, 6.579251212010100995060178),
    (7.5, 7.534364236758732955158368),
    (8.0, 8.525161361065414300165531),
    (8.5, 9.54926725730099771173714),
    (9.0, 10.60460290274525022841723),
    (9.5, 11.68933342079726848256944),
    (10.0, 12.80182748008146961120772),
    (10.5, 13.94062521940376363316124),
    (11.0, 15.10441257307551529522571),
    (11.5, 16.2920004765672413202446),
    (12.0, 17.50230784587388583928765),
    (12.5, 18.73434751193644570163412),
    (13.0, 19.98721449566188614951736),
    (13.5, 21.26007615624470114141841),
    (14.0, 22.55216385312342288557085),
    (14.5, 23.86276584168908490618691),
    (15.0, 25.19122118273868150009343),
    (15.5, 26.53691449111561362395295),
    (16.0, 27.89927138384089156608944),
    (16.5, 29.27775451504081456046489),
    (17.0, 30.67186010608067280375837),
    (17.5, 32.08111489594734948650484),
    (18.0, 33.5050734501368888840079),
    (18.5, 34.94331577687681785679372),
    (19.0, 36.39544520803305357621562),
    (19.5, 37.86108650896109699174459),
    (20.0, 39.33988418719949403622465),
    (20.5, 40.83150097453079810977609),
    (21.0, 42.33561646075348502965988),
    (21.5, 43.85192586067516060422562),
    (22.0, 45.38013889847690802616047),
    (22.5, 46.91997879580877771828123),
    (23.0, 48.47118135183522387963965),
    (23.5, 50.03349410501915216625525),
    (24.0, 51.6066755677643735704464),
    (24.5, 53.19049452616926544365897),
    (25.0, 54.78472939811231919009334),
    (25.5, 56.38916764371994674445244),
    (26.0, 58.00360522298051993929486),
    (26.5, 59.62784609588432720667999),
    (27.0, 61.26170176100200198476558),
    (27.5, 62.90499082887650373140722),
    (28.0, 64.55753862700633105895132),
    (28.5, 66.21917683354902934065269),
    (29.0, 67.88974313718153498289114),
    (29.5, 69.56908092082363418263973),
    (30.0, 71.25703896716800901007441),
    (30.5, 72.95347118416940832383855),
    (31.0, 74.65823634883016438548764),
    (31.5, 76.37119786778277426317271),
    (32.0, 78.09222355331531063141681),
    (32.5, 79.82118541361436164165132),
    (33.0, 81.55795945611503717850297),
    (33.5, 83.30242550295005344288834),
    (34.0, 85.05446701758151741396016),
    (34.5, 86.81397094178107419314118),
    (35.0, 88.58082754219767880362692),
    (35.5, 90.35493026581838826592594),
    (36.0, 92.13617560368709248333304),
    (36.5, 93.92446296229975837783816),
    (37.0, 95.71969454214320248495799),
    (37.5, 97.52177522288820419751304),
    (38.0, 99.33061245478742692932609),
    (38.5, 101.1461161558645693286926),
    (39.0, 102.9681986145138126987523),
    (39.5, 104.7967743971583078684426),
    (40.0, 106.6317602606434591262011),
    (40.5, 108.4730750690653840531984),
    (41.0, 110.3206397147573954290535),
    (41.5, 112.1743770431778775093621),
    (42.0, 114.0342117814617032329203),
    (42.5, 115.9000704704145301234203),
    (43.0, 117.7718813997450715388381),
    (43.5, 119.6495745463449012688534),
    (44.0, 121.533081515438633962311),
    (44.5, 123.4223354844395396780147),
    (45.0, 125.3172711493568951252074),
    (45.5, 127.2178246736117342069153),
    (46.0, 129.1239336391272148825986),
    (46.5, 131.0355369995686389386569),
    (47.0, 132.9525750356163098828226),
    (47.5, 134.8749893121619495665641),
    (48.0, 136.8027226373263684696436),
    (48.5, 138.7357190232025450917566),
    (49.0, 140.6739236482342593987077),
    (49.5, 142.6172828211459826044561),
    (50.0, 144.5657439463448860089184),
)
