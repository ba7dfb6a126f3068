"""
Генерация отчетов по сериям расчетов: записи прогонов и пятичисловые сводки AREP.
"""

import math
import os
from typing import Any, Dict, List, Sequence

import pandas as pd

from analysis.experiment import ExperimentReport
from utils.constants import CSV_COLUMNS, OUTPUT_FORMATS, SUMMARY_COLUMNS
from utils.data_validator import require_choice
from utils.file_operations import write_dataframe, write_json
from utils.logger import get_logger

logger = get_logger(__name__)


def _json_value(value: Any) -> Any:
    """NaN в JSON не допускается и заменяется на null."""
    if isinstance(value, float) and math.isnan(value):
        return None
    return value


class ReportGenerator:
    def __init__(self, config: Dict[str, Any]):
        self.config = config
        self.export_settings = config.get('EXPORT_SETTINGS', {})

    def summary_path(self, output_path: str) -> str:
        """Путь файла сводки рядом с файлом записей: <stem>_summary.csv."""
        stem, _ = os.path.splitext(output_path)
        return f"{stem}_summary.csv"

    def records_frame(self, reports: Sequence[ExperimentReport]) -> pd.DataFrame:
        """Записи всех прогонов в порядке серий и зерен, столбцы CSV_COLUMNS."""
        rows = [record for report in reports for record in report.records]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)

    def summary_frame(self, reports: Sequence[ExperimentReport]) -> pd.DataFrame:
        """Сводки по конфигурациям, столбцы SUMMARY_COLUMNS."""
        return pd.DataFrame([report.summary for report in reports], columns=SUMMARY_COLUMNS)

    def generate_reports(self, reports: Sequence[ExperimentReport], output_path: str,
                         output_format: str = 'csv') -> Dict[str, str]:
        """
        Сохранение записей и сводок.

        Args:
            reports: Отчеты серий
            output_path: Путь файла записей
            output_format: 'csv' (записи и <stem>_summary.csv) или 'json' (один документ)

        Returns:
            Словарь с путями к сохраненным файлам
        """
        require_choice('format', output_format, OUTPUT_FORMATS)
        logger.info(f"Сохранение результатов {len(reports)} серий в {output_path}")

        if output_format == 'json':
            self._generate_json_report(reports, output_path)
            return {'json': output_path}

        self._generate_csv_report(reports, output_path)
        summary_path = self.summary_path(output_path)
        write_dataframe(self.summary_frame(reports), summary_path,
                        encoding=self.export_settings.get('encoding', 'utf-8'))
        logger.info(f"Сводка сохранена в {summary_path}")
        return {'csv': output_path, 'summary': summary_path}

    def _generate_csv_report(self, reports: Sequence[ExperimentReport], output_path: str) -> None:
        """CSV с записями прогонов."""
        write_dataframe(self.records_frame(reports), output_path,
                        encoding=self.export_settings.get('encoding', 'utf-8'))
        logger.info(f"CSV-отчет сохранен в {output_path}")

    def _generate_json_report(self, reports: Sequence[ExperimentReport], output_path: str) -> None:
        """JSON-документ с массивами records и summaries."""
        document = {
            'records': [{key: _json_value(record[key]) for key in CSV_COLUMNS}
                        for report in reports for record in report.records],
            'summaries': [{key: _json_value(report.summary[key]) for key in SUMMARY_COLUMNS}
                          for report in reports],
        }
        write_json(document, output_path)
        logger.info(f"JSON-отчет сохранен в {output_path}")

    def generate_executive_summary(self, reports: Sequence[ExperimentReport]) -> str:
        """
        Краткое текстовое резюме по сериям.

        Args:
            reports: Отчеты серий

        Returns:
            Текст резюме
        """
        summary_lines: List[str] = []
        summary_lines.append("СВОДКА РАСЧЕТОВ ЭРМИТА-HDMR")
        summary_lines.append("=" * 60)

        for report in reports:
            summary = report.summary
            summary_lines.append(
                f"{summary['problem']} d={summary['d']} N={summary['N']} K={summary['K']} "
                f"beta={summary['beta']}: прогонов {summary['runs']}, неудачных {summary['failed']}, "
                f"медиана AREP {summary['median']:.4g} % [{summary['min']:.4g}, {summary['max']:.4g}]"
            )

        return '\n'.join(summary_lines)
