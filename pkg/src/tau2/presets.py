"""Benchmark configurations and reference Bethe states.

Two benchmark chains at p = 3 ship with the package (an N = 2 and an N = 3
parameter set, both real and constraint-satisfying), together with the
reference states of their full spectra at shift parameters phi = 0 and
phi = 1: sector label k, the (p-1)N roots, and the inhomogeneous-term
constant c, printed to five decimals.  The reference states serve as solver
seeds, as regression targets, and as ready-made inputs for the demos and the
CLI.  Use ``reference_states(n_sites, phi)`` to get them as BetheState
objects.
"""

from __future__ import annotations

import math

from .bethe import BetheState
from .model import ModelConfig, SiteParams


def _site(d, f, g, h):
    return SiteParams(d_plus=d[0], d_minus=d[1], f_plus=f[0], f_minus=f[1],
                      g_plus=g[0], g_minus=g[1], h_plus=h[0], h_minus=h[1])


_R3 = math.sqrt(3.0)
_R2 = math.sqrt(2.0)

#: N = 2 benchmark: both sites have symmetric (+/-) couplings.
BENCHMARK_N2 = ModelConfig(p=3, sites=(
    _site(d=(2.0, 2.0), f=(0.5, 0.5), g=(3.0, 3.0), h=(1 / 3, 1 / 3)),
    _site(d=(_R3, _R3), f=(1 / _R3, 1 / _R3), g=(_R2, _R2), h=(1 / _R2, 1 / _R2)),
))

#: N = 1 benchmark: the first site of BENCHMARK_N2 on its own.
BENCHMARK_N1 = ModelConfig(p=3, sites=(BENCHMARK_N2.sites[0],))

#: N = 3 benchmark: fully asymmetric couplings.
BENCHMARK_N3 = ModelConfig(p=3, sites=(
    _site(d=(2.0, 3.0), f=(0.4, 0.6), g=(4.0, 1.0), h=(0.3, 1.2)),
    _site(d=(0.2, 1.0), f=(0.8, 4.0), g=(0.1, 0.4), h=(8.0, 2.0)),
    _site(d=(3.0, 1.5), f=(1.0, 0.5), g=(2.0, 5.0), h=(0.75, 0.3)),
))


def benchmark_config(n_sites: int) -> ModelConfig:
    try:
        return {1: BENCHMARK_N1, 2: BENCHMARK_N2, 3: BENCHMARK_N3}[n_sites]
    except KeyError:
        raise ValueError(f"no benchmark with {n_sites} sites") from None


def degenerate_n1_config(branch: str = "ff") -> ModelConfig:
    """An N = 1 chain on which the inhomogeneous term vanishes (M = 0).

    branch "ff": g- h+ = -F+ F-;  branch "dd": g- h+ = -D+ D-.
    Both satisfy the two per-site constraints.  The d/f couplings are chosen
    asymmetric so that the three transfer-matrix eigenvalue curves stay
    distinct (a fully +/- symmetric choice would collapse the k = 1 and
    k = 2 sectors onto one curve and defeat the diagonalization oracle).
    """
    if branch == "ff":
        # d+=1, d-=2, f+=1, f-=1/2; then g-h- = 1/2, g+h+ = 2, g-h+ = -1/2
        return ModelConfig(p=3, sites=(
            _site(d=(1.0, 2.0), f=(1.0, 0.5), g=(-2.0, 0.5), h=(-1.0, 1.0)),
        ))
    if branch == "dd":
        # d+=2, d-=1, f+=1/2, f-=1; then g-h- = 2, g+h+ = 1/2, g-h+ = -2
        return ModelConfig(p=3, sites=(
            _site(d=(2.0, 1.0), f=(0.5, 1.0), g=(-0.5, 2.0), h=(-1.0, 1.0)),
        ))
    raise ValueError("branch must be 'ff' or 'dd'")


#: Reference shift parameters the state tables were solved at.
REFERENCE_PHIS = (0.0, 1.0)

_STATES_N2_PHI0 = (
    (0, (-0.41481-0.48777j, -0.41481+0.48777j, +0.16543-0.35104j, +0.16543+0.35104j), +0.07290+0.00000j),
    (0, (-0.66826-1.49724j, -0.04032-0.48519j, +0.06867+1.53930j, +0.14115+0.44313j), +0.07290+0.00000j),
    (0, (-0.66826+1.49724j, -0.04032+0.48519j, +0.06867-1.53930j, +0.14115-0.44313j), +0.07290+0.00000j),
    (1, (-0.38066-1.28929j, -0.18674+0.42053j, +0.33201+0.59239j, +0.48476+1.21602j), -0.08872+0.02966j),
    (1, (-0.21413-0.44969j, +0.07446+0.72464j, +0.16553-0.57279j, +0.22352+1.23748j), -0.08872+0.02966j),
    (1, (-0.22477-0.43023j, +0.06454+0.56084j, +0.18032-0.56761j, +0.22930+1.37666j), -0.08872+0.02966j),
    (2, (-0.38066+1.28929j, -0.18674-0.42053j, +0.33201-0.59239j, +0.48476-1.21602j), -0.08872-0.02966j),
    (2, (-0.21413+0.44969j, +0.07446-0.72464j, +0.16553+0.57279j, +0.22352-1.23748j), -0.08872-0.02966j),
    (2, (-0.22477+0.43023j, +0.06454-0.56084j, +0.18032+0.56761j, +0.22930-1.37666j), -0.08872-0.02966j),
)

_STATES_N2_PHI1 = (
    (0, (-1.11708+0.45660j, -0.21978-0.33183j, +0.12531+0.21565j, +0.14087-0.52391j), +0.08911+0.01654j),
    (0, (-1.24428+1.38621j, -0.01821-0.44011j, +0.04372-1.51711j, +0.14809+0.38754j), +0.08911+0.01654j),
    (0, (-1.32148+1.26038j, -0.00660+0.42108j, +0.12388-0.38684j, +0.13352-1.47809j), +0.08911+0.01654j),
    (1, (-0.79677-1.04629j, -0.63157+0.66772j, +0.09800+0.34342j, +1.41424+1.03879j), -0.21364+0.11605j),
    (1, (-0.54458-0.56692j, -0.39125+1.02018j, +0.18039-0.47610j, +0.83934+1.02649j), -0.21364+0.11605j),
    (1, (-0.50863-0.52803j, -0.23822+1.02316j, +0.21632-0.51790j, +0.61444+1.02642j), -0.21364+0.11605j),
    (2, (-0.16368-0.27977j, -0.15197-1.49634j, +0.56109+1.39587j, +0.74134-0.43992j), -0.09374-0.03046j),
    (2, (-0.17493+0.27850j, +0.03704-0.71000j, +0.53931+0.65255j, +0.58536-1.04121j), -0.09374-0.03046j),
    (2, (-0.18197+0.26803j, +0.06268-0.56937j, +0.53093+0.61846j, +0.57514-1.13728j), -0.09374-0.03046j),
)

_STATES_N3_PHI0 = (
    (0, (-1.40457-0.54217j, -1.14643+0.48574j, +0.21213-0.51244j, +0.26215+0.52628j, +2.23260+0.58946j, +2.25229-0.54688j), +0.11101+0.00000j),
    (0, (-1.37944+0.44821j, -1.08099-1.53477j, +0.15169-0.57167j, +0.25002-1.51348j, +2.22412+0.58246j, +2.24278-0.55234j), -0.11101-0.00000j),
    (0, (-1.34404+1.57012j, -1.20296-0.43961j, +0.17315+0.54669j, +0.31772+1.41399j, +2.22188+0.59253j, +2.24243-0.54213j), -0.11101-0.00000j),
    (0, (-1.40652-0.53734j, -1.16460+0.49706j, +0.16933-0.47789j, +0.21026+1.53395j, +2.25354+0.54696j, +2.34616-1.56275j), +0.11101-0.00000j),
    (0, (-1.40978-0.54088j, -1.16556+0.47933j, +0.19408+0.51898j, +0.27686-1.43479j, +2.21747-0.59576j, +2.29509-1.56846j), -0.11101+0.00000j),
    (0, (-1.34697+1.55928j, -1.19166-0.45593j, +0.16445+0.47419j, +0.18455-0.54318j, +2.25285+0.53773j, +2.34494+1.56950j), -0.11101-0.00000j),
    (0, (-1.37026+0.45267j, -1.08588-1.50001j, +0.16322+0.56858j, +0.18792-0.51432j, +2.21829-0.58781j, +2.29488-1.56071j), -0.11101-0.00000j),
    (0, (-1.37070+0.44175j, -1.04295-1.51148j, -0.00426-1.54904j, +0.21005+0.50411j, +2.26182+0.54164j, +2.35421-1.56857j), -0.11101-0.00000j),
    (0, (-1.33477+1.56165j, -1.18061-0.43623j, +0.13757+1.54896j, +0.25827-0.51762j, +2.22542-0.59242j, +2.30229-1.56434j), +0.11101-0.00000j),
    (1, (-2.36717-0.64080j, -1.31215+0.72735j, +0.21062-0.51316j, +0.25655+0.52768j, +1.95573-1.23307j, +1.97213+0.77216j), +0.15671-0.11901j),
    (1, (-2.25583+1.55193j, -1.41980-0.27051j, +0.17387+0.54910j, +0.31057+1.39847j, +1.94548-1.22217j, +1.96142+0.77494j), -0.15671+0.11901j),
    (1, (-2.26897+0.33840j, -1.32210-1.28008j, +0.15296-0.57835j, +0.24772-1.50723j, +1.94115-1.23792j, +1.96495+0.76376j), -0.15671+0.11901j),
    (1, (-2.38318-0.63525j, -1.32403+0.71167j, +0.19433+0.51841j, +0.27035-1.42332j, +1.94420+0.71893j, +2.01404-0.25029j), +0.15671-0.11901j),
    (1, (-2.37051-0.62354j, -1.33281+0.72828j, +0.17173-0.47490j, +0.20767+1.53107j, +1.97436-1.27414j, +2.06528-0.24660j), +0.15671-0.11901j),
    (1, (-2.24810+0.32841j, -1.31046-1.25036j, +0.01507-1.55164j, +0.20876+0.50544j, +1.98173-1.28189j, +2.06872-0.25140j), -0.15671+0.11901j),
    (1, (-2.24610+1.53155j, -1.40132-0.26168j, +0.14240+1.55026j, +0.25296-0.51903j, +1.94771+0.72751j, +2.02007-0.24686j), -0.15671+0.11901j),
    (1, (-2.26756+1.53313j, -1.40348-0.28154j, +0.16668+0.47080j, +0.18558-0.54463j, +1.97161-1.28526j, +2.06290-0.25235j), +0.15671-0.11901j),
    (1, (-2.24957+0.35238j, -1.34102-1.25755j, +0.16508+0.57440j, +0.18837-0.51321j, +1.93836+0.72705j, +2.01449-0.24291j), +0.15671-0.11901j),
    (2, (-1.96565-0.85298j, -1.71352+0.65345j, +0.21076-0.51328j, +0.25633+0.52691j, +1.95534-0.73070j, +1.97245+1.27644j), +0.15671+0.11901j),
    (2, (-1.90791+0.17785j, -1.68438-1.40896j, +0.15356-0.57754j, +0.24708-1.50880j, +1.94392-0.73195j, +1.96344+1.26765j), -0.15671-0.11901j),
    (2, (-1.93248+1.31745j, -1.74683-0.32459j, +0.17394+0.54847j, +0.31135+1.40051j, +1.94926-0.72122j, +1.96047+1.28081j), -0.15671-0.11901j),
    (2, (-1.97499-0.84383j, -1.72780+0.65878j, +0.17166-0.47433j, +0.20771+1.53004j, +1.97521-0.77013j, +2.06392+0.25931j), +0.15671+0.11901j),
    (2, (-1.97821-0.85630j, -1.72547+0.64443j, +0.19443+0.51789j, +0.26961-1.42148j, +1.94102+1.22018j, +2.01433+0.25512j), +0.15671+0.11901j),
    (2, (-1.91801+1.30696j, -1.72979-0.32555j, +0.14265+1.54942j, +0.25294-0.51873j, +1.94809+1.23029j, +2.01983+0.25904j), -0.15671-0.11901j),
    (2, (-1.89125+0.17854j, -1.66717-1.39606j, +0.01519-1.54823j, +0.20867+0.50484j, +1.98138-0.77737j, +2.06890+0.25654j), -0.15671-0.11901j),
    (2, (-1.93408+1.29994j, -1.73940-0.33954j, +0.16686+0.47060j, +0.18568-0.54466j, +1.97229-0.77985j, +2.06435+0.25334j), +0.15671+0.11901j),
    (2, (-1.90020+0.19277j, -1.68723-1.38868j, +0.16492+0.57395j, +0.18835-0.51320j, +1.93588+1.23266j, +2.01399+0.26233j), +0.15671+0.11901j),
)

_STATES_N3_PHI1 = (
    (0, (-1.18077-0.63093j, -0.77548+0.42106j, +0.20506-0.48775j, +0.41948+0.54567j, +1.84319-0.63232j, +2.12005+0.78427j), +0.03770-0.00000j),
    (0, (-1.10529+0.34161j, -0.62163-1.46040j, +0.05537-0.62831j, +0.37145-1.52447j, +1.82712-0.62376j, +2.10450+0.75374j), -0.03770-0.00000j),
    (0, (-1.09702-1.53557j, -0.90813-0.34431j, +0.08547+0.52810j, +0.62553+1.18619j, +1.84220-0.61528j, +2.08348+0.78086j), +0.03770+0.00000j),
    (0, (-1.18259-0.61106j, -0.80832+0.44954j, +0.12775-0.40794j, +0.16347-1.54513j, +1.92326+0.29737j, +2.40796-1.32436j), -0.03770+0.00000j),
    (0, (-1.19765-0.62056j, -0.80874+0.41520j, +0.27139+0.55866j, +0.41527-1.22883j, +1.66113+1.39627j, +2.29013-0.52074j), +0.03770+0.00000j),
    (0, (-1.10378-1.56716j, -0.87367-0.36252j, +0.10949+0.38463j, +0.16998-0.54536j, +1.91951+0.28868j, +2.41000-1.33987j), -0.03770-0.00000j),
    (0, (-1.07093+0.34409j, -0.63932-1.35059j, +0.16445+0.63300j, +0.22628-0.53500j, +1.67027+1.41723j, +2.28078-0.50872j), +0.03770+0.00000j),
    (0, (-1.08780+0.31120j, -0.46010-1.19085j, -0.36385+1.47511j, +0.19124+0.44571j, +1.92905+0.28943j, +2.42300-1.33060j), +0.03770-0.00000j),
    (0, (-1.06678-1.55890j, -0.87270-0.31728j, +0.22250+1.47739j, +0.37070-0.49410j, +1.68121+1.39916j, +2.29661-0.50628j), +0.03770+0.00000j),
    (1, (-1.45639-0.68240j, -0.79897+0.53967j, +0.20441-0.49025j, +0.40545+0.55500j, +1.67944-0.96068j, +1.83770+0.82124j), +0.03029-0.01164j),
    (1, (-1.33685-1.52407j, -0.96823-0.26543j, +0.07943+0.53134j, +0.60852+1.14853j, +1.67359-0.92257j, +1.81519+0.81477j), +0.03029-0.01164j),
    (1, (-1.32102+0.27890j, -0.69844-1.31874j, +0.04696-0.65235j, +0.37397-1.51493j, +1.63642-0.95097j, +1.83377+0.79908j), -0.03029+0.01164j),
    (1, (-1.48351-0.67132j, -0.83065+0.52522j, +0.27356+0.56560j, +0.39269-1.21484j, +1.54772+0.85431j, +1.97184-0.27640j), +0.03029-0.01164j),
    (1, (-1.46147-0.65184j, -0.83885+0.56232j, +0.13313-0.40377j, +0.16379-1.54201j, +1.87621-0.08166j, +1.99885-1.24207j), -0.03029+0.01164j),
    (1, (-1.28987+0.24571j, -0.62143-1.14415j, -0.29341+1.56827j, +0.19063+0.44950j, +1.88066-0.09019j, +2.00508-1.24657j), +0.03029-0.01164j),
    (1, (-1.30182-1.56123j, -0.93594-0.24033j, +0.22228+1.48496j, +0.35819-0.50515j, +1.55627+0.87479j, +1.97267-0.27048j), +0.03029-0.01164j),
    (1, (-1.34976-1.56888j, -0.93296-0.28003j, +0.11438+0.37805j, +0.17059-0.54750j, +1.87114-0.09041j, +1.99826-1.25026j), -0.03029+0.01164j),
    (1, (-1.27444+0.29316j, -0.74475-1.23106j, +0.16793+0.65364j, +0.22647-0.53682j, +1.52925+0.87589j, +1.96718-0.27224j), +0.03029-0.01164j),
    (2, (-1.35404-0.79738j, -0.89775+0.51195j, +0.20503-0.48909j, +0.40262+0.55358j, +1.63222-0.72436j, +1.88358+1.16274j), +0.03029+0.01164j),
    (2, (-1.23264+0.20519j, -0.79546-1.39083j, +0.05445-0.64797j, +0.36607-1.52397j, +1.59919-0.70425j, +1.88004+1.13766j), -0.03029-0.01164j),
    (2, (-1.28301+1.50079j, -1.03057-0.29809j, +0.08365+0.52808j, +0.60821+1.16322j, +1.63587-0.68972j, +1.85750+1.15474j), -0.03029-0.01164j),
    (2, (-1.36454-0.77340j, -0.93180+0.53133j, +0.13333-0.40114j, +0.16253-1.54377j, +1.83391+0.10660j, +2.03823-0.84378j), -0.03029-0.01164j),
    (2, (-1.37931-0.79345j, -0.92608+0.49850j, +0.27348+0.56123j, +0.38926-1.19929j, +1.42181+1.05767j, +2.09248+0.09277j), +0.03029+0.01164j),
    (2, (-1.24340+1.47355j, -0.99698-0.27755j, +0.22686+1.48133j, +0.35590-0.50156j, +1.44032+1.08390j, +2.08896+0.09936j), -0.03029-0.01164j),
    (2, (-1.20219+0.18087j, -0.67017-1.27621j, -0.33153-1.52955j, +0.18985+0.44636j, +1.84149+0.09855j, +2.04421-0.84418j), -0.03029-0.01164j),
    (2, (-1.28768+1.45716j, -0.99898-0.31718j, +0.11502+0.37783j, +0.17053-0.54662j, +1.83151+0.09548j, +2.04125-0.84925j), +0.03029+0.01164j),
    (2, (-1.19567+0.22143j, -0.81573-1.31025j, +0.16976+0.64979j, +0.22613-0.53479j, +1.40246+1.09819j, +2.08470+0.09306j), +0.03029+0.01164j),
)


_TABLES = {
    (2, 0.0): _STATES_N2_PHI0,
    (2, 1.0): _STATES_N2_PHI1,
    (3, 0.0): _STATES_N3_PHI0,
    (3, 1.0): _STATES_N3_PHI1,
}


def reference_states(n_sites: int, phi: float) -> list[BetheState]:
    """The published-precision reference states for a benchmark chain."""
    try:
        rows = _TABLES[(n_sites, float(phi))]
    except KeyError:
        raise ValueError(
            f"no reference states for N={n_sites}, phi={phi}; "
            f"available: {sorted(_TABLES)}"
        ) from None
    return [BetheState(k=k, phi=complex(phi), roots=roots, c=c) for k, roots, c in rows]
