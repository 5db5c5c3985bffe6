//! Stieltjes constants gamma_0..gamma_30, 80 significant digits.

pub(crate) const STIELTJES: [&str; 31] = [
    "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467",
    "-0.072815845483676724860586375874901319137736338334337952599006559741401433571511485",
    "-0.0096903631928723184845303860352125293590658061013407498807013654518507553822804142",
    "0.0020538344203033458661600465427533842857158044454106182454814833369138344921129701",
    "0.0023253700654673000574681701775260680009044694137848509907580409071248410053155219",
    "0.0007933238173010627017533348774444448307315394045848870757342562698231482118017152",
    "-0.00023876934543019960987242184190800427778371515635807863147642530739106755999296387",
    "-0.00052728956705775104607409750547885828199625347296989533101340422688568273246514118",
    "-0.0003521233538030395096020521650012087417291805337923503566573315073642817765060653",
    "-3.4394774418088048177914623798227390620789538594441629759291904843150103344461528e-5",
    "0.00020533281490906479468372228923706530295985377416676430384020871435300902407106918",
    "0.00027018443954390352667290208206795567382784205868840250397373580313679999096429298",
    "0.00016727291210514019335350154334118344660780663280556582804779093765121959703274076",
    "-2.7463806603760158860007603693355181526785337670395536092833089167570518607008873e-5",
    "-0.00020920926205929994583713969734458495783154421150606956243420832571875776184134792",
    "-0.00028346865532024144664293447499712697706870298071767525396994329296762569053316716",
    "-0.00019969685830896977470778456320324039191576497403406127985966716255438059474138584",
    "2.6277037109918336699466597630510122816078692929114060797117518352283182836596199e-5",
    "0.00030736840814925282659275475194862564552381129073146169108110365231480839020972899",
    "0.00050360545304735562905559643771716003532126980764949783732379092701043809476462232",
    "0.0004663435615115594494005948244335505251131434739256889976707266280985445821300329",
    "0.00010443776975600011581079567436772049104442825070554674783437148673908044119941322",
    "-0.00054159958220399770165519617317410558454386092870074880183919131638421202747278466",
    "-0.0012439620904082457792997415995371658091470281139646377165329711083780032273004475",
    "-0.0015885112789035615619061966115211158573187228221441290674781941254809503833797487",
    "-0.0010745919527384888247242919873531730892739793314531703614099025817813688528797251",
    "0.00065680351863715443150477300335621524888606506047753737609928252508911709650347767",
    "0.0034778369136185382090073595742588115476629156638859192922693690891636011525163861",
    "0.0064000685317006294581072282219458636666371981445884752205903306258370932138971345",
    "0.0073711517704722391344124024235594021578413274885128401531803115932600949640801249",
    "0.0035577288555731609479135377489084026108096506495221250761313817426048953753477683",
];
