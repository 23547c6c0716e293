#!/usr/bin/env python3
"""
End-to-end check of the etale CLI: runs each subcommand the way a user would
and compares the JSON it prints against known values.
"""
import json
import os
import subprocess
import sys

ETALE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "etale")


def run_cli(*argv):
    """Run main.py with --json, return (exit code, parsed stdout or None)"""
    cmd = [sys.executable, "main.py", *argv, "--json"]
    print(f"Command: python {' '.join(cmd[1:])}")
    process = subprocess.run(cmd, cwd=ETALE_DIR, capture_output=True, text=True, timeout=600)
    if process.stderr.strip():
        print(process.stderr.strip().splitlines()[-1])
    out = process.stdout.strip()
    return process.returncode, (json.loads(out) if out else None)


def test_field_info():
    """Q(sqrt -5): discriminant -20, signature (0, 1)"""
    print("🧪 Testing field-info...")
    code, out = run_cli("field-info", "--poly", "x^2+5")
    if code != 0 or out["discriminant"] != "-20" or out["signature"] != ["0", "1"]:
        print(f"❌ Unexpected output: {out}")
        return False
    print("✅ field-info works")
    return True


def test_class_group():
    print("\n🧪 Testing class-group...")
    code, out = run_cli("class-group", "--poly", "x^2+5")
    if code != 0 or out["snf"] != ["2"]:
        print(f"❌ Unexpected class group: {out}")
        return False
    print("✅ Cl(Q(sqrt -5)) = Z/2")
    return True


def test_cohomology():
    print("\n🧪 Testing cohomology groups...")
    code, out = run_cli("cohomology", "--poly", "x^2+5", "--n", "2")
    orders = [g["order"] for g in out["h"]] if out else None
    if code != 0 or orders != ["2", "2", "4", "2"]:
        print(f"❌ Unexpected group orders: {orders}")
        return False
    print(f"✅ H^0..H^3 orders {orders}")
    return True


def test_cup_product():
    print("\n🧪 Testing cup product with the Bockstein...")
    x = json.dumps({"base_poly": "x^2+5", "n": 2, "v": "-1"})
    code, out = run_cli("cup", "--poly", "x^2+5", "--n", "2", "--x", x, "--y", "bockstein")
    if code != 0 or out["values"] != ["0"]:
        print(f"❌ Unexpected cup product: {out}")
        return False
    print("✅ x ∪ β(x) = 0 for K(i)/K")
    return True


def test_kim_invariant():
    print("\n🧪 Testing Kim invariant...")
    results = []
    for poly, v, expected in (("x^2+5", "-1", True), ("x^2-x+4", "5", False)):
        code, out = run_cli("kim", "--poly", poly, "--n", "2", "--v", v, "--verify")
        ok = code == 0 and out["vanishes"] is expected and out["norm_image_member"] is expected
        print(f"{'✅' if ok else '❌'} {poly}, v={v}: vanishes={out and out['vanishes']}")
        results.append(ok)
    return all(results)


def test_error_exit_codes():
    print("\n🧪 Testing error exit codes...")
    usage, _ = run_cli("field-info", "--poly", "x^2+2x+1")
    math_error, _ = run_cli("kim", "--poly", "x^2+5", "--n", "2", "--v", "3")
    if usage != 2 or math_error != 1:
        print(f"❌ Exit codes usage={usage} math={math_error}, expected 2 and 1")
        return False
    print("✅ Usage errors exit 2, mathematical errors exit 1")
    return True


def main():
    print("🚀 Etale CLI Smoke Test")
    print("=" * 50)

    tests = [
        ("Field Info", test_field_info),
        ("Class Group", test_class_group),
        ("Cohomology Groups", test_cohomology),
        ("Cup Product", test_cup_product),
        ("Kim Invariant", test_kim_invariant),
        ("Error Exit Codes", test_error_exit_codes),
    ]

    results = []

    for test_name, test_func in tests:
        print(f"\n{'='*20}")
        print(f"Running: {test_name}")
        print('='*20)

        try:
            result = test_func()
            results.append((test_name, result))
        except Exception as e:
            print(f"❌ {test_name} failed with error: {e}")
            results.append((test_name, False))

    print(f"\n{'='*50}")
    print("📋 TEST SUMMARY")
    print('='*50)

    passed = sum(1 for _, result in results if result)
    total = len(results)

    for test_name, result in results:
        status = "✅ PASS" if result else "❌ FAIL"
        print(f"{status} {test_name}")

    print(f"\n🎯 Overall: {passed}/{total} tests passed")

    if passed == total:
        print("\n🎉 All smoke tests passed!")
        return True
    print(f"\n⚠️  {total - passed} tests failed.")
    return False


if __name__ == "__main__":
    success = main()
    sys.exit(0 if success else 1)
