"""CLI subcommands"""
from .check import cmd_check
from .compare import cmd_compare
from .convergence import cmd_convergence
from .critical import cmd_critical
from .run import cmd_run

__all__ = ['cmd_check', 'cmd_compare', 'cmd_convergence', 'cmd_critical', 'cmd_run']
