public class Interest {
    public static long simple(long principal, int basisPoints, int years) {
        return principal * basisPoints * years / 10000;
    }
}
