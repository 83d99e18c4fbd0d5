from . import appendix, models, seesaw
from .appendix import AppendixReport, evaluate_appendix
from .models import SearchResult, SeesawConfig
from .seesaw import facet_task, seesaw_eacc, seesaw_qc
