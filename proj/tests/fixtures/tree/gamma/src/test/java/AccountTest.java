import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class AccountTest {
    @Test
    public void testDeposit() {
        Account account = new Account();
        account.deposit(250);
        assertEquals(250, account.balance());
    }

    @Test
    public void testWithdraw() {
        Account account = new Account();
        account.deposit(250);
        account.withdraw(100);
        assertEquals(150, account.balance());
    }
}
