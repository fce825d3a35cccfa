public class Limits {
    public static long clampWithdrawal(long requested, long available) {
        if (requested > available) {
            return available;
        }
        return requested;
    }
}
