"""
Метод конечных разностей Эрмита-HDMR для многомерных задач Дирихле.
Содержит модули базиса, геометрии, дискретизации, решателей и анализа точности.
"""

__version__ = "1.0.0"
