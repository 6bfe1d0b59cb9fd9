import sys
from enum import Enum
from pathlib import Path
from typing import Optional

import click
import typer
from loguru import logger
from pydantic import ValidationError

from goal_arbiter.arguments import enumerate_arguments
from goal_arbiter.attacks import AttackKind, compute_relations
from goal_arbiter.errors import GoalArbiterError
from goal_arbiter.frameworks import build_af, goal_attacks, successful_filter
from goal_arbiter.parser import load_kb, serialize_kb
from goal_arbiter.postulates import check_postulates
from goal_arbiter.reference import compare, load_reference
from goal_arbiter.render import (
    argument_dot,
    arguments_report,
    arguments_tree,
    extensions_report,
    framework_dot,
    framework_report,
    postulate_report,
    relation_dot,
    relation_report,
    selection_report,
)
from goal_arbiter.semantics import SEMANTICS, SelectionPolicy, conflict_free_sets, get_semantics, select
from goal_arbiter.settings import Level, Policy, ResourceMode, Settings, get_settings

POSTULATE_FAILURE = 1
UNEXPECTED_ERROR = 70


class KindChoice(str, Enum):
    t = "t"
    r = "r"
    s = "s"
    all = "all"

    def kinds(self):
        if self is KindChoice.all:
            return [AttackKind.TERMINAL, AttackKind.RESOURCE, AttackKind.SUPERFLUOUS]
        return [AttackKind.from_code(self.value)]


class OutputFormat(str, Enum):
    report = "report"
    dot = "dot"
    tree = "tree"


class Pipeline:
    """ Lazily computed stages for one knowledge-base file. """

    def __init__(self, path, settings, kinds=None, bound=None):
        self.settings = settings
        self.kb = load_kb(path)
        self.store = enumerate_arguments(self.kb)
        self.kinds = kinds or KindChoice.all.kinds()
        self.bound = bound or settings.bound
        self._relations = None

    @property
    def relations(self):
        if self._relations is None:
            self._relations = compute_relations(self.store, self.kb.resources, self.kinds)
        return self._relations

    def framework(self, filtered=False):
        af = build_af(list(self.relations.values()), self.store)
        return successful_filter(af) if filtered else af

    def goal_framework(self):
        return goal_attacks(self.framework(filtered=True), self.store)

    def selection_framework(self, level):
        return self.goal_framework() if level is Level.GOALS else self.framework(filtered=True)


def create_app(settings):

    app = typer.Typer(
        add_completion=False,
        no_args_is_help=True,
        help="Detect goal incompatibilities and select compatible goal sets from a plan-rule knowledge base.",
    )
    state = {}

    @app.callback()
    def startup(log_level: Optional[str] = typer.Option(None, help="Loguru level, overrides the configured one")):
        """ Runs once per invocation. Reads the configuration and sets up logging.
        """
        try:
            state["settings"] = settings() if callable(settings) else settings
        except ValidationError as e:
            typer.echo(f"Invalid configuration: {e}", err=True)
            raise typer.Exit(code=2)

        # Configure logging
        logger.remove()
        logger.add(sys.stderr, level=(log_level or state["settings"].log_level).upper())

        logger.trace("Available semantics:")
        for name in sorted(SEMANTICS):
            logger.trace(f"- {name}")

    def run(action, out: Optional[Path]):
        """ Run a command body, write its output and map errors to exit codes.
        """
        try:
            output, exit_code = action()
        except GoalArbiterError as e:
            logger.error(str(e))
            raise typer.Exit(code=e.exit_code)
        except (typer.Exit, click.ClickException):
            raise
        except Exception:
            logger.opt(exception=sys.exc_info()).error("Unexpected error")
            raise typer.Exit(code=UNEXPECTED_ERROR)

        if out:
            Path(out).write_text(output, encoding="utf-8")
            logger.info(f"Wrote {out}")
        else:
            typer.echo(output, nl=False)
        if exit_code:
            raise typer.Exit(code=exit_code)

    @app.command("arguments")
    def cmd_arguments(
        path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Knowledge-base file"),
        fmt: OutputFormat = typer.Option(OutputFormat.report, "--format"),
        out: Optional[Path] = typer.Option(None, "--out"),
    ):
        """ List every instrumental argument. """
        def action():
            store = Pipeline(path, state["settings"]).store
            if fmt is OutputFormat.tree:
                return arguments_tree(store), 0
            if fmt is OutputFormat.dot:
                return "".join(argument_dot(arg) for arg in store), 0
            return arguments_report(store), 0
        run(action, out)

    @app.command("attacks")
    def cmd_attacks(
        path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Knowledge-base file"),
        kind: KindChoice = typer.Option(KindChoice.all, "--kind"),
        fmt: OutputFormat = typer.Option(OutputFormat.report, "--format"),
        out: Optional[Path] = typer.Option(None, "--out"),
    ):
        """ Show the terminal, resource and superfluous attack relations. """
        def action():
            pipeline = Pipeline(path, state["settings"], kinds=kind.kinds())
            render = relation_dot if fmt is OutputFormat.dot else relation_report
            return "\n".join(render(r, pipeline.store) for r in pipeline.relations.values()), 0
        run(action, out)

    @app.command("framework")
    def cmd_framework(
        path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Knowledge-base file"),
        kind: KindChoice = typer.Option(KindChoice.all, "--kind"),
        filtered: bool = typer.Option(False, "--filtered", help="Keep only successful attacks"),
        level: Optional[Level] = typer.Option(None, "--level"),
        semantics: Optional[str] = typer.Option(None, "--semantics",
                                                help="Also list the extensions under this semantics"),
        fmt: OutputFormat = typer.Option(OutputFormat.report, "--format"),
        bound: Optional[int] = typer.Option(None, "--bound", min=1),
        out: Optional[Path] = typer.Option(None, "--out"),
    ):
        """ Show the general framework, or the goal framework with --level goals. """
        def action():
            settings = state["settings"]
            pipeline = Pipeline(path, settings, kinds=kind.kinds(), bound=bound)
            if (level or settings.level) is Level.GOALS:
                fw = pipeline.goal_framework()
            else:
                fw = pipeline.framework(filtered=filtered)
            output = framework_dot(fw) if fmt is OutputFormat.dot else framework_report(fw)
            if semantics:
                try:
                    chosen = get_semantics(semantics, bound=pipeline.bound)
                except ValueError as e:
                    raise typer.BadParameter(str(e), param_hint="--semantics")
                output += extensions_report(semantics, chosen.extensions(fw))
            return output, 0
        run(action, out)

    @app.command("select")
    def cmd_select(
        path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Knowledge-base file"),
        policy: Optional[Policy] = typer.Option(None, "--policy"),
        level: Optional[Level] = typer.Option(None, "--level"),
        bound: Optional[int] = typer.Option(None, "--bound", min=1),
        reference: Optional[Path] = typer.Option(None, "--reference", exists=True, dir_okay=False,
                                                 help="YAML table of expected metrics"),
        out: Optional[Path] = typer.Option(None, "--out"),
    ):
        """ Select the maximal sets of compatible goals. """
        def action():
            settings = state["settings"]
            pipeline = Pipeline(path, settings, bound=bound)
            fw = pipeline.selection_framework(level or settings.level)
            result = select(fw, SelectionPolicy(first_criterion=policy or settings.policy), pipeline.bound)
            logger.info(f"Selected {len(result.proper_extensions)} extension(s)")
            notes = None
            if reference is not None:
                notes = compare(load_reference(reference), result, pipeline.store)
            return selection_report(result, notes), 0
        run(action, out)

    @app.command("check")
    def cmd_check(
        path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Knowledge-base file"),
        resource_mode: Optional[ResourceMode] = typer.Option(None, "--resource-mode"),
        joint_resources: Optional[bool] = typer.Option(None, "--joint-resources/--pairwise-resources"),
        bound: Optional[int] = typer.Option(None, "--bound", min=1),
        out: Optional[Path] = typer.Option(None, "--out"),
    ):
        """ Check the rationality postulates on every conflict-free extension. """
        def action():
            settings = state["settings"]
            pipeline = Pipeline(path, settings, bound=bound)
            extensions = conflict_free_sets(pipeline.framework(filtered=True), pipeline.bound)
            report = check_postulates(
                extensions, pipeline.store,
                resource_mode=resource_mode or settings.resource_mode,
                joint_resources=settings.joint_resources if joint_resources is None else joint_resources)
            return postulate_report(report), 0 if report.passed else POSTULATE_FAILURE
        run(action, out)

    @app.command("export")
    def cmd_export(
        path: Path = typer.Argument(..., exists=True, dir_okay=False, help="Knowledge-base file"),
        out: Path = typer.Option(..., "--out", file_okay=False, help="Directory to write into"),
        bound: Optional[int] = typer.Option(None, "--bound", min=1),
    ):
        """ Write every artifact for the knowledge base into a directory. """
        def action():
            settings = state["settings"]
            pipeline = Pipeline(path, settings, bound=bound)
            out.mkdir(parents=True, exist_ok=True)
            (out / "arguments").mkdir(exist_ok=True)

            files = {
                "kb.txt": serialize_kb(pipeline.kb),
                "arguments.txt": arguments_report(pipeline.store),
                "framework.dot": framework_dot(pipeline.framework()),
                "framework-filtered.dot": framework_dot(pipeline.framework(filtered=True)),
                "goals.dot": framework_dot(pipeline.goal_framework()),
            }
            for arg in pipeline.store:
                files[f"arguments/{arg.id}.dot"] = argument_dot(arg)
            for kind, relation in pipeline.relations.items():
                files[f"attacks-{kind.value}.dot"] = relation_dot(relation, pipeline.store)

            fw = pipeline.selection_framework(settings.level)
            files["selection.txt"] = selection_report(
                select(fw, SelectionPolicy(first_criterion=settings.policy), pipeline.bound))
            report = check_postulates(
                conflict_free_sets(pipeline.framework(filtered=True), pipeline.bound), pipeline.store,
                resource_mode=settings.resource_mode, joint_resources=settings.joint_resources)
            files["postulates.txt"] = postulate_report(report)

            for name, content in sorted(files.items()):
                (out / name).write_text(content, encoding="utf-8")
                logger.debug(f"Wrote {out / name}")
            return f"Exported {len(files)} files to {out}\n", 0
        run(action, None)

    return app


app = create_app(get_settings)


def main():
    app()


if __name__ == "__main__":
    main()
