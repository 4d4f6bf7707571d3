"""
Green Coalitions - Base Command
Clase base abstracta para los subcomandos de la línea de órdenes
"""

import argparse
from abc import ABC, abstractmethod


class BaseCommand(ABC):
    """
    Clase base abstracta para subcomandos.
    Define la interfaz que todos los comandos deben implementar.
    """

    name: str = ''
    help: str = ''

    def register(self, subparsers) -> argparse.ArgumentParser:
        """
        Crea el subparser del comando.

        Args:
            subparsers: Resultado de ArgumentParser.add_subparsers()

        Returns:
            Parser del subcomando
        """
        parser = subparsers.add_parser(self.name, help=self.help, description=self.help)
        self.add_arguments(parser)
        parser.set_defaults(command=self)
        return parser

    @abstractmethod
    def add_arguments(self, parser: argparse.ArgumentParser):
        """
        Declara los argumentos del comando.

        Args:
            parser: Parser del subcomando
        """
        pass

    @abstractmethod
    def execute(self, args: argparse.Namespace) -> int:
        """
        Ejecuta el comando.

        Args:
            args: Argumentos ya analizados

        Returns:
            Código de salida
        """
        pass
