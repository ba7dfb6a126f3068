import os
import subprocess
import sys

from utils.config_loader import load_config

SETTINGS_PATH = os.path.join(os.path.dirname(os.path.abspath(__file__)), '..', 'config.py')
MAIN_SCRIPT = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'main.py')


def build_command(case, results_dir="results"):
    """Командная строка main.py для одной серии из BENCHMARK_CASES"""
    cmd = [sys.executable, MAIN_SCRIPT, "--settings", SETTINGS_PATH,
           "--output", os.path.join(results_dir, f"{case['name']}.csv")]
    for key, value in case.items():
        if key == 'name':
            continue
        cmd.extend([f"--{key}", str(value)])
    return cmd


def run_case(case, results_dir="results"):
    """Запуск одной серии; возвращает код завершения main.py"""
    print(f"Запуск серии: {case['name']}")

    try:
        cmd = build_command(case, results_dir)

        process = subprocess.Popen(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.STDOUT,
            universal_newlines=True
        )

        # Чтение вывода в реальном времени
        while True:
            output = process.stdout.readline()
            if output == '' and process.poll() is not None:
                break
            if output:
                print(output.strip())

        return_code = process.poll()
        if return_code != 0:
            print(f"Серия {case['name']} завершилась с кодом {return_code}")
        return return_code

    except Exception as e:
        print(f"Исключение при запуске серии {case['name']}: {str(e)}")
        return 1


def main():
    """Запуск всех серий из BENCHMARK_CASES"""
    print("Запуск серий из config.py")

    cases = load_config(SETTINGS_PATH).get('BENCHMARK_CASES')
    if not cases:
        print("Ошибка: В config.py не определен список BENCHMARK_CASES")
        return 1
    print(f"Найдено серий: {len(cases)}")

    results = {}
    for i, case in enumerate(cases, 1):
        print(f"\n--- Серия {i}/{len(cases)}: {case['name']} ---")
        results[case['name']] = run_case(case)

    successful = [name for name, code in results.items() if code == 0]
    with_failures = [name for name, code in results.items() if code == 2]
    broken = [name for name, code in results.items() if code not in (0, 2)]

    print("\n" + "=" * 50)
    print("ИТОГИ ВЫПОЛНЕНИЯ:")
    print(f"Успешно: {len(successful)} серий")
    print(f"С неудачными прогонами: {len(with_failures)} серий")
    print(f"Ошибки конфигурации: {len(broken)} серий")

    for title, names in (("Серии с неудачными прогонами:", with_failures),
                         ("Серии с ошибками:", broken)):
        if names:
            print(title)
            for name in names:
                print(f"  - {name}")

    return 0 if not broken and not with_failures else 2


if __name__ == "__main__":
    sys.exit(main())
