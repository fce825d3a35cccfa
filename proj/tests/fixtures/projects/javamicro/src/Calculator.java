public class Calculator {
    public static int add(int a, int b) {
        return a + b;
    }

    public static int mul(int a, int b) {
        return a * b;
    }

    public static int square(int x) {
        return mul(x, x);
    }
}
